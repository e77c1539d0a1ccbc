// sincnet/sincnet.hpp

// Copyright 2026  SincNet C++ Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#pragma once

// Umbrella include for the whole library.

#include "sincnet/analysis.hpp"
#include "sincnet/checkpoint.hpp"
#include "sincnet/common.hpp"
#include "sincnet/config.hpp"
#include "sincnet/dataio.hpp"
#include "sincnet/filterbank.hpp"
#include "sincnet/gradcheck.hpp"
#include "sincnet/layers.hpp"
#include "sincnet/network.hpp"
#include "sincnet/tensor.hpp"
#include "sincnet/trainer.hpp"
#include "sincnet/verification.hpp"
