// tools/sincnet_main.cpp

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

// Command-line front end. Subcommands: synth, train, eval-id, eval-verif,
// analyze, gradcheck. Exit codes: 0 success, 1 validation error (flags,
// config, input formats), 2 runtime failure. All randomness flows from
// --seed; environment variables are never consulted.

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "sincnet/sincnet.hpp"

namespace {

using namespace sincnet;

namespace fs = std::filesystem;

void echo_config(const ConfigMap& cfg) {
  std::cout << "# resolved configuration\n" << render_config(cfg) << std::flush;
}

// ---------------------------------------------------------------------- synth

struct SynthOpts {
  std::string out;
  SynthConfig cfg;
};

int run_synth(const SynthOpts& opts) {
  Manifest manifest = synth_corpus(opts.cfg, opts.out);
  ConfigMap echo;
  echo["out"] = opts.out;
  echo["speakers"] = std::to_string(opts.cfg.n_speakers);
  echo["utts"] = std::to_string(opts.cfg.train_utts);
  echo["test_utts"] = std::to_string(opts.cfg.test_utts);
  echo["impostor_speakers"] = std::to_string(opts.cfg.impostor_speakers);
  echo["impostor_utts"] = std::to_string(opts.cfg.impostor_utts);
  echo["seconds"] = format_double(opts.cfg.seconds);
  echo["fs"] = std::to_string(opts.cfg.fs);
  echo["seed"] = std::to_string(opts.cfg.seed);
  echo_config(echo);
  std::cout << "manifest: " << (fs::path(opts.out) / "manifest.csv").string() << "\n"
            << "utterances: " << manifest.entries.size() << "\n";
  return 0;
}

// ---------------------------------------------------------------------- train

ConfigMap train_defaults() {
  ConfigMap cfg;
  cfg["seed"] = "7";
  cfg["epochs"] = "12";
  cfg["minibatch"] = "128";
  cfg["lr"] = "0.001";
  cfg["alpha"] = "0.95";
  cfg["epsilon"] = "1e-7";
  cfg["cnn_mode"] = "sinc";
  cfg["threads"] = "1";
  cfg["chunk_ms"] = "200";
  cfg["overlap_ms"] = "10";
  cfg["sample_rate"] = "8000";
  cfg["n_filters"] = "8";
  cfg["filter_length"] = "65";
  cfg["conv_channels"] = "8";
  cfg["conv_kernels"] = "5";
  cfg["pool_width"] = "3";
  cfg["fc_sizes"] = "64";
  cfg["leaky_slope"] = "0.2";
  cfg["dropout_rate"] = "0";
  cfg["mel_fmin"] = "30";
  cfg["mel_fmax"] = "0";
  cfg["checkpoint_interval"] = "0";
  cfg["eval"] = "true";
  cfg["shuffle"] = "true";
  return cfg;
}

const std::set<std::string>& train_allowed_keys() {
  static const std::set<std::string> keys = [] {
    std::set<std::string> k;
    for (const auto& [key, value] : train_defaults()) k.insert(key);
    return k;
  }();
  return keys;
}

struct TrainOpts {
  std::string config_path;
  std::string data;
  std::string out;
  ConfigMap overrides;
};

int run_train(const TrainOpts& opts) {
  ConfigMap cfg = train_defaults();
  if (!opts.config_path.empty()) cfg = merge_config(cfg, parse_config_file(opts.config_path));
  cfg = merge_config(cfg, opts.overrides);
  validate_config_keys(cfg, train_allowed_keys());

  std::string cnn_mode = get_string(cfg, "cnn_mode", "sinc");
  if (cnn_mode != "sinc" && cnn_mode != "standard")
    throw ConfigError("cnn_mode must be 'sinc' or 'standard', got '" + cnn_mode + "'");
  auto fs_rate = static_cast<std::size_t>(get_u64(cfg, "sample_rate", 8000));
  auto chunk_ms = static_cast<std::size_t>(get_u64(cfg, "chunk_ms", 200));
  auto overlap_ms = static_cast<std::size_t>(get_u64(cfg, "overlap_ms", 10));

  Manifest manifest = Manifest::load(opts.data);
  validate_manifest(manifest);
  auto label_of = speaker_label_map(manifest);
  if (label_of.size() < 2) throw ConfigError("training needs at least two speakers");

  std::vector<Utterance> train_utts = load_utterances(manifest, "train", fs_rate);
  std::vector<Utterance> test_utts = load_utterances(manifest, "test", fs_rate);
  bool eval = get_bool(cfg, "eval", true) && !test_utts.empty();

  ArchConfig arch;
  arch.first_kind = cnn_mode == "sinc" ? "sinc_conv" : "conv1d";
  arch.input_samples = chunk_window_samples(fs_rate, chunk_ms);
  arch.sample_rate = fs_rate;
  arch.n_filters = static_cast<std::size_t>(get_u64(cfg, "n_filters", 8));
  arch.filter_length = static_cast<std::size_t>(get_u64(cfg, "filter_length", 65));
  arch.mel_fmin_hz = get_double(cfg, "mel_fmin", 30.0);
  arch.mel_fmax_hz = get_double(cfg, "mel_fmax", 0.0);
  arch.conv_channels = get_size_list(cfg, "conv_channels", {});
  arch.conv_kernels = get_size_list(cfg, "conv_kernels", {});
  arch.pool_width = static_cast<std::size_t>(get_u64(cfg, "pool_width", 3));
  arch.fc_sizes = get_size_list(cfg, "fc_sizes", {});
  arch.n_classes = label_of.size();
  arch.leaky_slope = get_double(cfg, "leaky_slope", 0.2);
  arch.dropout_rate = get_double(cfg, "dropout_rate", 0.0);

  TrainConfig tc;
  tc.minibatch = static_cast<std::size_t>(get_u64(cfg, "minibatch", 128));
  tc.epochs = static_cast<std::size_t>(get_u64(cfg, "epochs", 12));
  tc.seed = get_u64(cfg, "seed", 7);
  tc.chunk_ms = chunk_ms;
  tc.overlap_ms = overlap_ms;
  tc.threads = static_cast<std::size_t>(get_u64(cfg, "threads", 1));
  tc.checkpoint_interval = static_cast<std::size_t>(get_u64(cfg, "checkpoint_interval", 0));
  tc.shuffle = get_bool(cfg, "shuffle", true);

  RmspropConfig oc;
  oc.lr = get_double(cfg, "lr", 0.001);
  oc.alpha = get_double(cfg, "alpha", 0.95);
  oc.epsilon = get_double(cfg, "epsilon", 1e-7);

  FrameDataset train_set = build_frame_dataset(train_utts, label_of, chunk_ms, overlap_ms);
  FrameDataset eval_set;
  if (eval) eval_set = build_frame_dataset(test_utts, label_of, chunk_ms, overlap_ms);

  ConfigMap echo = cfg;
  echo["n_classes"] = std::to_string(arch.n_classes);
  echo["input_samples"] = std::to_string(arch.input_samples);
  echo["train_frames"] = std::to_string(train_set.size());
  echo_config(echo);

  Rng rng(Rng::derive(tc.seed, 0x696e6974));
  Network net = Network::build(arch, rng);

  fs::create_directories(opts.out);
  ConfigMap meta = meta_from_arch(arch, chunk_ms, overlap_ms, manifest.speakers("train"));
  auto logs = train(net, train_set, eval ? &eval_set : nullptr, tc, oc,
                    [&](std::size_t epoch, Network& n) {
                      char name[32];
                      std::snprintf(name, sizeof(name), "model_epoch%04zu.snc", epoch);
                      save_checkpoint((fs::path(opts.out) / name).string(), n, meta);
                    });
  save_checkpoint((fs::path(opts.out) / "model.snc").string(), net, meta);
  write_train_log((fs::path(opts.out) / "train_log.csv").string(), logs);

  std::cout << "epochs = " << logs.size() << "\n"
            << "final_loss = " << format_double(logs.back().loss) << "\n"
            << "final_train_fer_percent = " << format_double(logs.back().train_fer) << "\n";
  if (eval)
    std::cout << "final_eval_fer_percent = " << format_double(logs.back().eval_fer) << "\n";
  std::cout << "model = " << (fs::path(opts.out) / "model.snc").string() << "\n"
            << "log = " << (fs::path(opts.out) / "train_log.csv").string() << "\n";
  return 0;
}

// -------------------------------------------------------------------- eval-id

struct EvalIdOpts {
  std::string checkpoint;
  std::string manifest_path;
  std::string split = "test";
  std::string out;
  std::size_t minibatch = 64;
  std::size_t threads = 1;
};

int run_eval_id(const EvalIdOpts& opts) {
  ConfigMap meta;
  Network net = load_checkpoint(opts.checkpoint, &meta);
  net.set_threads(opts.threads);
  auto fs_rate = static_cast<std::size_t>(get_u64(meta, "sample_rate", 0));
  auto chunk_ms = static_cast<std::size_t>(get_u64(meta, "chunk_ms", 200));
  auto overlap_ms = static_cast<std::size_t>(get_u64(meta, "overlap_ms", 10));
  std::vector<std::string> speakers = speakers_from_meta(meta);
  if (speakers.empty()) throw FormatError(opts.checkpoint + ": checkpoint lists no speakers");
  std::map<std::string, std::size_t> label_of;
  for (const auto& s : speakers) label_of.emplace(s, label_of.size());

  Manifest manifest = Manifest::load(opts.manifest_path);
  std::vector<Utterance> utts = load_utterances(manifest, opts.split, fs_rate);
  if (utts.empty()) throw ConfigError("no utterances in split '" + opts.split + "'");

  double cer = evaluate_cer(net, utts, label_of, chunk_ms, overlap_ms);
  FrameDataset frames = build_frame_dataset(utts, label_of, chunk_ms, overlap_ms);
  double fer = evaluate_fer(net, frames, opts.minibatch);

  ConfigMap echo;
  echo["checkpoint"] = opts.checkpoint;
  echo["manifest"] = opts.manifest_path;
  echo["split"] = opts.split;
  echo["minibatch"] = std::to_string(opts.minibatch);
  echo["threads"] = std::to_string(opts.threads);
  echo_config(echo);
  std::cout << "cer_percent = " << format_double(cer) << "\n"
            << "fer_percent = " << format_double(fer) << "\n";

  if (!opts.out.empty()) {
    nlohmann::ordered_json j;
    j["cer_percent"] = cer;
    j["fer_percent"] = fer;
    j["n_utterances"] = utts.size();
    j["n_frames"] = frames.size();
    std::ofstream f(opts.out, std::ios::trunc);
    if (!f) throw FormatError("cannot write report: " + opts.out);
    f << j.dump(2) << "\n";
  }
  return 0;
}

// ----------------------------------------------------------------- eval-verif

struct EvalVerifOpts {
  std::string checkpoint;
  std::string manifest_path;
  std::string out;
  std::string method = "both";
  std::size_t impostors = 10;
  std::uint64_t seed = 7;
  std::size_t threads = 1;
};

int run_eval_verif(const EvalVerifOpts& opts) {
  if (opts.method != "both" && opts.method != "dvector" && opts.method != "posterior")
    throw ConfigError("method must be 'both', 'dvector', or 'posterior'");
  ConfigMap meta;
  Network net = load_checkpoint(opts.checkpoint, &meta);
  net.set_threads(opts.threads);
  auto fs_rate = static_cast<std::size_t>(get_u64(meta, "sample_rate", 0));
  auto chunk_ms = static_cast<std::size_t>(get_u64(meta, "chunk_ms", 200));
  auto overlap_ms = static_cast<std::size_t>(get_u64(meta, "overlap_ms", 10));

  Manifest manifest = Manifest::load(opts.manifest_path);
  std::vector<Trial> trials = make_trials(manifest, opts.impostors, opts.seed);

  std::map<std::string, Utterance> audio;
  for (auto& u : load_utterances(manifest, "test", fs_rate)) audio[u.utterance_id] = u;
  for (auto& u : load_utterances(manifest, "impostor", fs_rate)) audio[u.utterance_id] = u;

  ConfigMap echo;
  echo["checkpoint"] = opts.checkpoint;
  echo["manifest"] = opts.manifest_path;
  echo["method"] = opts.method;
  echo["impostors"] = std::to_string(opts.impostors);
  echo["seed"] = std::to_string(opts.seed);
  echo["threads"] = std::to_string(opts.threads);
  echo_config(echo);

  if (!opts.out.empty()) fs::create_directories(opts.out);

  if (opts.method == "both" || opts.method == "dvector") {
    std::vector<Utterance> enroll_utts = load_utterances(manifest, "train", fs_rate);
    auto enrollment = enrollment_dvectors(net, enroll_utts, chunk_ms, overlap_ms);
    std::vector<Trial> scored = trials;
    score_trials_dvector(net, scored, enrollment, audio, chunk_ms, overlap_ms);
    EerResult eer = equal_error_rate(scored);
    std::cout << "dvector_eer_percent = " << format_double(eer.eer_percent) << "\n";
    if (!opts.out.empty()) {
      write_trials_csv((fs::path(opts.out) / "trials_dvector.csv").string(), scored);
      write_eer_json((fs::path(opts.out) / "eer_dvector.json").string(), eer);
    }
  }
  if (opts.method == "both" || opts.method == "posterior") {
    std::vector<std::string> speakers = speakers_from_meta(meta);
    if (speakers.empty()) throw FormatError(opts.checkpoint + ": checkpoint lists no speakers");
    std::map<std::string, std::size_t> class_of;
    for (const auto& s : speakers) class_of.emplace(s, class_of.size());
    std::vector<Trial> scored = trials;
    score_trials_posterior(net, scored, class_of, audio, chunk_ms, overlap_ms);
    EerResult eer = equal_error_rate(scored);
    std::cout << "posterior_eer_percent = " << format_double(eer.eer_percent) << "\n";
    if (!opts.out.empty()) {
      write_trials_csv((fs::path(opts.out) / "trials_posterior.csv").string(), scored);
      write_eer_json((fs::path(opts.out) / "eer_posterior.json").string(), eer);
    }
  }
  return 0;
}

// -------------------------------------------------------------------- analyze

struct AnalyzeOpts {
  std::string checkpoint;
  std::string out;
  std::string log_sinc;
  std::string log_cnn;
  std::size_t n_fft = 4096;
};

int run_analyze(const AnalyzeOpts& opts) {
  if (opts.checkpoint.empty() && (opts.log_sinc.empty() || opts.log_cnn.empty()))
    throw ConfigError("analyze needs --checkpoint and/or both --log-sinc and --log-cnn");
  fs::create_directories(opts.out);

  ConfigMap echo;
  echo["out"] = opts.out;
  echo["n_fft"] = std::to_string(opts.n_fft);
  if (!opts.checkpoint.empty()) echo["checkpoint"] = opts.checkpoint;
  if (!opts.log_sinc.empty()) echo["log_sinc"] = opts.log_sinc;
  if (!opts.log_cnn.empty()) echo["log_cnn"] = opts.log_cnn;
  echo_config(echo);

  if (!opts.checkpoint.empty()) {
    ConfigMap meta;
    Network net = load_checkpoint(opts.checkpoint, &meta);
    SincConvLayer* sinc = net.sinc_layer();
    if (!sinc)
      throw ConfigError(opts.checkpoint +
                        ": checkpoint has no sinc filterbank layer (standard CNN model)");
    CutoffParams raw = sinc->raw_params();
    auto fs_rate = static_cast<double>(get_u64(meta, "sample_rate", 0));
    export_filters(raw, sinc->filter_length(), fs_rate, opts.out, opts.n_fft);
    for (std::size_t idx : filters_above_nyquist(raw)) {
      auto [f1, f2] = reparametrize(raw.f1_raw[idx], raw.f2_raw[idx]);
      std::cerr << "warning: filter " << idx << " upper cutoff " << format_double(f2)
                << " exceeds Nyquist (normalized 0.5)\n";
    }
    std::cout << "exported_filters = " << raw.count() << "\n";
  }

  if (!opts.log_sinc.empty() && !opts.log_cnn.empty()) {
    auto rows = compare_convergence(read_train_log(opts.log_sinc), read_train_log(opts.log_cnn));
    write_convergence_csv((fs::path(opts.out) / "convergence.csv").string(), rows);
    std::cout << "final_fer_sinc_percent = " << format_double(rows.back().fer_sinc) << "\n"
              << "final_fer_cnn_percent = " << format_double(rows.back().fer_cnn) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ gradcheck

struct GradcheckOpts {
  std::uint64_t seed = 7;
  std::size_t trials = 20;
  double step = 1e-6;
  double threshold = 1e-4;
};

int run_gradcheck(const GradcheckOpts& opts) {
  ConfigMap echo;
  echo["seed"] = std::to_string(opts.seed);
  echo["trials"] = std::to_string(opts.trials);
  echo["step"] = format_double(opts.step);
  echo["threshold"] = format_double(opts.threshold);
  echo_config(echo);

  GradCheckReport report = gradcheck_many(opts.seed, opts.trials, opts.step);
  std::cout << "checked_elements = " << report.n_checked << "\n"
            << "max_rel_err = " << format_double(report.max_rel_err) << "\n"
            << "worst_param = " << report.worst_param << "\n";
  bool pass = report.max_rel_err < opts.threshold;
  std::cout << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SincNet: learnable sinc filterbank training and evaluation"};
  app.require_subcommand(1);

  SynthOpts synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "Generate a synthetic multi-speaker corpus");
  synth_cmd->add_option("--out", synth.out, "Output directory")->required();
  synth_cmd->add_option("--speakers", synth.cfg.n_speakers, "Training speakers");
  synth_cmd->add_option("--utts", synth.cfg.train_utts, "Training utterances per speaker");
  synth_cmd->add_option("--test-utts", synth.cfg.test_utts, "Test utterances per speaker");
  synth_cmd->add_option("--impostor-speakers", synth.cfg.impostor_speakers,
                        "Held-out impostor speakers");
  synth_cmd->add_option("--impostor-utts", synth.cfg.impostor_utts,
                        "Utterances per impostor speaker");
  synth_cmd->add_option("--seconds", synth.cfg.seconds, "Utterance length in seconds");
  synth_cmd->add_option("--fs", synth.cfg.fs, "Sample rate in Hz");
  synth_cmd->add_option("--seed", synth.cfg.seed, "Corpus seed");

  TrainOpts train_opts;
  CLI::App* train_cmd = app.add_subcommand("train", "Train a speaker-identification model");
  train_cmd->add_option("--config", train_opts.config_path, "Flat key = value config file");
  train_cmd->add_option("--data", train_opts.data, "Dataset manifest CSV")->required();
  train_cmd->add_option("--out", train_opts.out, "Output directory")->required();
  std::map<std::string, std::string> train_flag_values;
  // Flags override config-file keys, which override built-in defaults.
  const std::vector<std::pair<std::string, std::string>> train_flags = {
      {"--seed", "seed"},           {"--epochs", "epochs"},
      {"--minibatch", "minibatch"}, {"--lr", "lr"},
      {"--alpha", "alpha"},         {"--epsilon", "epsilon"},
      {"--cnn-mode", "cnn_mode"},   {"--threads", "threads"},
      {"--chunk-ms", "chunk_ms"},   {"--overlap-ms", "overlap_ms"},
      {"--sample-rate", "sample_rate"}, {"--n-filters", "n_filters"},
      {"--filter-length", "filter_length"}, {"--conv-channels", "conv_channels"},
      {"--conv-kernels", "conv_kernels"},   {"--pool-width", "pool_width"},
      {"--fc-sizes", "fc_sizes"},   {"--leaky-slope", "leaky_slope"},
      {"--dropout-rate", "dropout_rate"},   {"--mel-fmin", "mel_fmin"},
      {"--mel-fmax", "mel_fmax"},   {"--checkpoint-interval", "checkpoint_interval"},
      {"--eval", "eval"},           {"--shuffle", "shuffle"}};
  for (const auto& [flag, key] : train_flags)
    train_cmd->add_option(flag, train_flag_values[key], "Config key " + key);

  EvalIdOpts eval_id;
  CLI::App* eval_id_cmd = app.add_subcommand("eval-id", "Sentence-level speaker identification");
  eval_id_cmd->add_option("--checkpoint", eval_id.checkpoint, "Model checkpoint")->required();
  eval_id_cmd->add_option("--manifest", eval_id.manifest_path, "Dataset manifest CSV")->required();
  eval_id_cmd->add_option("--split", eval_id.split, "Manifest split to evaluate");
  eval_id_cmd->add_option("--out", eval_id.out, "Optional JSON report path");
  eval_id_cmd->add_option("--minibatch", eval_id.minibatch, "Evaluation minibatch");
  eval_id_cmd->add_option("--threads", eval_id.threads, "Worker threads");

  EvalVerifOpts eval_verif;
  CLI::App* eval_verif_cmd = app.add_subcommand("eval-verif", "Speaker verification EER");
  eval_verif_cmd->add_option("--checkpoint", eval_verif.checkpoint, "Model checkpoint")->required();
  eval_verif_cmd->add_option("--manifest", eval_verif.manifest_path, "Dataset manifest CSV")
      ->required();
  eval_verif_cmd->add_option("--out", eval_verif.out, "Output directory for trials and reports");
  eval_verif_cmd->add_option("--method", eval_verif.method, "both | dvector | posterior");
  eval_verif_cmd->add_option("--impostors", eval_verif.impostors, "Impostor trials per genuine");
  eval_verif_cmd->add_option("--seed", eval_verif.seed, "Trial sampling seed");
  eval_verif_cmd->add_option("--threads", eval_verif.threads, "Worker threads");

  AnalyzeOpts analyze;
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "Export filter and convergence analyses");
  analyze_cmd->add_option("--checkpoint", analyze.checkpoint, "Model checkpoint");
  analyze_cmd->add_option("--out", analyze.out, "Output directory")->required();
  analyze_cmd->add_option("--log-sinc", analyze.log_sinc, "SincNet training log CSV");
  analyze_cmd->add_option("--log-cnn", analyze.log_cnn, "Standard-CNN training log CSV");
  analyze_cmd->add_option("--n-fft", analyze.n_fft, "DFT size (power of two)");

  GradcheckOpts gradcheck;
  CLI::App* gradcheck_cmd =
      app.add_subcommand("gradcheck", "Finite-difference check of all analytic gradients");
  gradcheck_cmd->add_option("--seed", gradcheck.seed, "Base seed");
  gradcheck_cmd->add_option("--trials", gradcheck.trials, "Number of random tiny networks");
  gradcheck_cmd->add_option("--step", gradcheck.step, "Finite-difference step");
  gradcheck_cmd->add_option("--threshold", gradcheck.threshold, "PASS threshold on max rel err");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (synth_cmd->parsed()) return run_synth(synth);
    if (train_cmd->parsed()) {
      for (const auto& [flag, key] : train_flags)
        if (train_cmd->count(flag)) train_opts.overrides[key] = train_flag_values[key];
      return run_train(train_opts);
    }
    if (eval_id_cmd->parsed()) return run_eval_id(eval_id);
    if (eval_verif_cmd->parsed()) return run_eval_verif(eval_verif);
    if (analyze_cmd->parsed()) return run_analyze(analyze);
    if (gradcheck_cmd->parsed()) return run_gradcheck(gradcheck);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
