// tools/tdsv.cpp

// Copyright 2026  the tdsv authors

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

// Command-line front door: extract, pool, score, fuse, eval, synth, shapes.
// Data goes to files or stdout; diagnostics go to stderr. Every command is
// deterministic given its flags and --seed; TDSV_THREADS caps parallelism.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "tdsv/archshapes.hpp"
#include "tdsv/common.hpp"
#include "tdsv/features.hpp"
#include "tdsv/formats.hpp"
#include "tdsv/metrics.hpp"
#include "tdsv/pooling.hpp"
#include "tdsv/scoring.hpp"
#include "tdsv/trials.hpp"

namespace fs = std::filesystem;
using namespace tdsv;

namespace {

int thread_budget() {
  if (const char* env = std::getenv("TDSV_THREADS")) {
    int n = std::atoi(env);
    if (n >= 1) return n;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Index-addressed parallel loop; callers write results into preallocated
// slots, so output ordering never depends on the schedule.
void parallel_for(std::size_t n, const std::function<void(std::size_t)>& fn) {
  std::size_t threads = std::min<std::size_t>(thread_budget(), n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first_error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  pool.reserve(threads);
  for (std::size_t t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      while (true) {
        std::size_t i = next.fetch_add(1);
        if (i >= n) break;
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!first_error) first_error = std::current_exception();
        }
      }
    });
  }
  for (std::thread& t : pool) t.join();
  if (first_error) std::rethrow_exception(first_error);
}

std::vector<fs::path> list_files(const std::string& dir, const std::string& ext) {
  if (!fs::is_directory(dir))
    throw Error(ErrorKind::kIoError, dir + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && entry.path().extension() == ext)
      files.push_back(entry.path());
  std::sort(files.begin(), files.end());
  return files;
}

// ---------------------------------------------------------------------------
// extract

struct ExtractOptions {
  std::string in_dir;
  std::string out_dir;
  std::string mode = "logmel";
  double window_ms = 20.0;
  double hop_ms = 10.0;
  int n_fft = 512;
  int n_mels = 64;
  double log_floor = 1e-10;
  int crop_min = 0;
  int crop_max = 0;
  std::uint64_t seed = 0;
};

int cmd_extract(const ExtractOptions& opt) {
  features::FeatureConfig cfg;
  cfg.window_len = opt.window_ms / 1000.0;
  cfg.hop_len = opt.hop_ms / 1000.0;
  cfg.n_fft = opt.n_fft;
  cfg.n_mels = opt.n_mels;
  cfg.log_floor = opt.log_floor;
  const bool logmel = opt.mode == "logmel";
  if (!logmel && opt.mode != "stft")
    throw Error(ErrorKind::kBadConfig, "mode must be logmel or stft");
  const bool crop = opt.crop_min > 0;

  std::vector<fs::path> wavs = list_files(opt.in_dir, ".wav");
  if (wavs.empty()) {
    std::cerr << "warning: no .wav files in " << opt.in_dir << "\n";
    return 0;
  }
  fs::create_directories(opt.out_dir);

  std::vector<std::string> failures(wavs.size());
  parallel_for(wavs.size(), [&](std::size_t i) {
    try {
      features::AudioClip clip = features::read_wav(wavs[i].string());
      features::FrameMatrix fm =
          logmel ? features::logmel_frames(clip, cfg) : features::stft_frames(clip, cfg);
      if (crop)
        fm = features::crop_frames(fm, opt.crop_min, opt.crop_max,
                                   opt.seed + static_cast<std::uint64_t>(i));
      fs::path out = fs::path(opt.out_dir) / (wavs[i].stem().string() + ".fmx");
      formats::write_frame_matrix(out.string(), fm);
    } catch (const std::exception& e) {
      failures[i] = e.what();
    }
  });

  int failed = 0;
  for (std::size_t i = 0; i < wavs.size(); ++i) {
    if (failures[i].empty()) continue;
    std::cerr << "error: " << wavs[i].string() << ": " << failures[i] << "\n";
    ++failed;
  }
  if (failed > 0) {
    std::cerr << failed << " of " << wavs.size() << " files failed\n";
    return 1;
  }
  std::cerr << "wrote " << wavs.size() << " feature files to " << opt.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// pool

struct PoolOptions {
  std::string frames;  // directory of .fmx files or a single file
  std::string method = "sp";
  std::string posteriors;  // directory of .cpm files or a single file
  std::string params;      // PRM1 container
  std::uint64_t seed_params = 0;
  bool have_seed_params = false;
  double tau = 1e-3;
  int proj_dim = 64;
  int clusters = 8;
  int ghosts = 2;
  int d2 = 20;
  std::string activation = "relu";
  std::string out;
};

int cmd_pool(const PoolOptions& opt) {
  std::vector<fs::path> inputs;
  if (fs::is_directory(opt.frames))
    inputs = list_files(opt.frames, ".fmx");
  else
    inputs.push_back(opt.frames);
  if (inputs.empty())
    throw Error(ErrorKind::kMissingInput, "no .fmx inputs under " + opt.frames);

  pooling::PoolingConfig cfg;
  cfg.tau = opt.tau;
  cfg.method = pooling::pool_method_from_string(opt.method);

  auto posterior_for = [&](const fs::path& frame_path) {
    if (opt.posteriors.empty())
      throw Error(ErrorKind::kMissingInput,
                  "character-level pooling needs --posteriors");
    if (fs::is_directory(opt.posteriors)) {
      fs::path p = fs::path(opt.posteriors) / (frame_path.stem().string() + ".cpm");
      return formats::read_char_posteriors(p.string());
    }
    return formats::read_char_posteriors(opt.posteriors);
  };

  // Parameters come from a PRM1 container or from a seeded generator; the
  // first input fixes the dimensions.
  features::FrameMatrix first = formats::read_frame_matrix(inputs[0].string());
  std::optional<pooling::SapParams> sap;
  std::optional<pooling::GvladParams> gvlad;
  std::optional<pooling::LocallyConnectedParams> lc;
  if (!opt.params.empty()) {
    formats::ParamContainer container = formats::read_params(opt.params);
    if (cfg.method == pooling::PoolMethod::kSap)
      sap = formats::sap_from_container(container);
    else if (cfg.method == pooling::PoolMethod::kGvp)
      gvlad = formats::gvlad_from_container(container);
    else if (cfg.method == pooling::PoolMethod::kClp)
      lc = formats::lc_from_container(container);
  } else if (opt.have_seed_params) {
    pooling::Activation act = pooling::activation_from_string(opt.activation);
    if (cfg.method == pooling::PoolMethod::kSap)
      sap = pooling::SapParams::random(first.cols, opt.proj_dim, opt.seed_params);
    else if (cfg.method == pooling::PoolMethod::kGvp)
      gvlad = pooling::GvladParams::random(first.cols, opt.clusters, opt.ghosts,
                                           opt.seed_params);
    else if (cfg.method == pooling::PoolMethod::kClp) {
      int k = posterior_for(inputs[0]).cols;
      lc = pooling::LocallyConnectedParams::random(k, first.cols, opt.d2, act,
                                                   opt.seed_params);
    }
  }

  std::vector<formats::EmbeddingRecord> records(inputs.size());
  parallel_for(inputs.size(), [&](std::size_t i) {
    features::FrameMatrix fm = formats::read_frame_matrix(inputs[i].string());
    pooling::PoolInputs side;
    if (sap) side.sap = &*sap;
    if (gvlad) side.gvlad = &*gvlad;
    if (lc) side.lc = &*lc;
    pooling::CharPosteriorMatrix post;
    if (cfg.method == pooling::PoolMethod::kClp) {
      post = posterior_for(inputs[i]);
      side.posteriors = &post;
    }
    records[i] = {inputs[i].stem().string(), pooling::pool(fm, cfg, side)};
  });

  formats::write_embeddings(opt.out, records);
  std::cerr << "pooled " << records.size() << " embeddings (" << opt.method
            << ", dim " << records.front().embedding.dim() << ")\n";
  return 0;
}

// ---------------------------------------------------------------------------
// score

struct ScoreOptions {
  std::string trials;
  std::string enroll_map;
  std::string embeddings;
  std::string cohort;
  std::string posteriors;
  double alpha = 1.0;
  int top_n = 300;
  bool diagnostics = false;
  std::string out;
};

int cmd_score(const ScoreOptions& opt) {
  std::vector<formats::TrialRecord> trial_list = formats::read_trial_list(opt.trials);
  std::vector<formats::EnrollmentRecord> enroll_map =
      formats::read_enroll_map(opt.enroll_map);

  std::map<std::string, pooling::Embedding> embeddings;
  for (formats::EmbeddingRecord& r : formats::read_embeddings(opt.embeddings))
    embeddings.emplace(std::move(r.id), std::move(r.embedding));

  std::map<std::string, scoring::PhrasePosterior> posteriors;
  const bool compensate = !opt.posteriors.empty();
  if (compensate)
    for (formats::PhrasePosteriorRecord& r :
         formats::read_phrase_posteriors(opt.posteriors))
      posteriors.emplace(std::move(r.id), std::move(r.posterior));

  auto embedding_of = [&](const std::string& id) -> const pooling::Embedding& {
    auto it = embeddings.find(id);
    if (it == embeddings.end())
      throw Error(ErrorKind::kUnresolvedId, "no embedding for id " + id);
    return it->second;
  };

  // Enrollment models: average of exactly three utterances. Speaker/phrase
  // metadata is not part of the embedding file, so the utterances are wrapped
  // with blank ids, which build_enrollment accepts as consistent.
  std::map<std::string, trials::EnrollmentModel> models;
  for (const formats::EnrollmentRecord& rec : enroll_map) {
    std::vector<trials::Utterance> utts;
    for (const std::string& utt_id : rec.utterance_ids) {
      trials::Utterance u;
      u.id = utt_id;
      u.embedding = embedding_of(utt_id);
      if (compensate) {
        auto it = posteriors.find(utt_id);
        if (it == posteriors.end())
          throw Error(ErrorKind::kUnresolvedId, "no phrase posterior for id " + utt_id);
        u.phrase_posterior = it->second;
      }
      utts.push_back(std::move(u));
    }
    models.emplace(rec.model_id, trials::build_enrollment(rec.model_id, utts));
  }

  const bool normalize = !opt.cohort.empty();
  scoring::AsNormConfig norm_cfg{opt.top_n};
  scoring::CohortSet cohort;
  std::map<std::string, scoring::NormStats> model_stats;
  std::map<std::string, scoring::NormStats> test_stats;
  if (normalize) {
    for (formats::EmbeddingRecord& r : formats::read_embeddings(opt.cohort))
      cohort.entries.push_back({std::move(r.id), std::move(r.embedding)});
    if (cohort.size() < opt.top_n)
      std::cerr << "warning: cohort has " << cohort.size()
                << " entries, fewer than top-n " << opt.top_n
                << "; using all of them\n";
    for (const auto& [model_id, model] : models)
      model_stats.emplace(
          model_id,
          scoring::asnorm_stats(scoring::cohort_scores(model.embedding, cohort),
                                norm_cfg));
  }

  // Resolve ids serially so that error messages are deterministic, then
  // score trials in parallel.
  struct ResolvedTrial {
    const trials::EnrollmentModel* model = nullptr;
    const pooling::Embedding* test = nullptr;
    const scoring::NormStats* model_stats = nullptr;
    const scoring::NormStats* test_stats = nullptr;
    const scoring::PhrasePosterior* test_posterior = nullptr;
  };
  std::vector<ResolvedTrial> resolved;
  resolved.reserve(trial_list.size());
  for (const formats::TrialRecord& t : trial_list) {
    ResolvedTrial r;
    auto model_it = models.find(t.model_id);
    if (model_it == models.end())
      throw Error(ErrorKind::kUnresolvedId, "no enrollment model for id " + t.model_id);
    r.model = &model_it->second;
    r.test = &embedding_of(t.test_id);
    if (normalize) {
      r.model_stats = &model_stats.at(t.model_id);
      auto [it, inserted] = test_stats.try_emplace(t.test_id);
      if (inserted)
        it->second =
            scoring::asnorm_stats(scoring::cohort_scores(*r.test, cohort), norm_cfg);
      r.test_stats = &it->second;
    }
    if (compensate) {
      auto it = posteriors.find(t.test_id);
      if (it == posteriors.end())
        throw Error(ErrorKind::kUnresolvedId, "no phrase posterior for id " + t.test_id);
      r.test_posterior = &it->second;
      if (!r.model->phrase_posterior)
        throw Error(ErrorKind::kMissingInput,
                    "model " + t.model_id + " has no phrase posterior");
    }
    resolved.push_back(r);
  }

  scoring::CompensationConfig comp_cfg{opt.alpha};
  std::vector<formats::ScoreRecord> records(trial_list.size());
  parallel_for(trial_list.size(), [&](std::size_t i) {
    const ResolvedTrial& r = resolved[i];
    double raw = scoring::cosine(r.model->embedding, *r.test);
    double spk =
        normalize ? scoring::asnorm_apply(raw, *r.model_stats, *r.test_stats) : raw;
    double phr = 0.0;
    double total = spk;
    if (compensate) {
      phr = scoring::phrase_similarity(*r.model->phrase_posterior, *r.test_posterior);
      total = scoring::total_score(spk, phr, comp_cfg);
    }
    formats::ScoreRecord& rec = records[i];
    rec.model_id = trial_list[i].model_id;
    rec.test_id = trial_list[i].test_id;
    rec.score = total;
    if (opt.diagnostics) rec.extras = {raw, spk, phr};
  });

  formats::write_scores(opt.out, records);
  std::cerr << "scored " << records.size() << " trials"
            << (normalize ? " with AS-Norm" : "")
            << (compensate ? " with compensation" : "") << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// fuse

int cmd_fuse(const std::vector<std::string>& inputs, const std::string& out) {
  if (inputs.empty())
    throw Error(ErrorKind::kMissingInput, "fuse needs at least one score file");
  std::vector<std::vector<formats::ScoreRecord>> systems;
  systems.reserve(inputs.size());
  for (const std::string& path : inputs) systems.push_back(formats::read_scores(path));

  const auto& base = systems.front();
  std::vector<std::vector<double>> columns;
  columns.reserve(systems.size());
  for (const auto& system : systems) {
    if (system.size() != base.size())
      throw Error(ErrorKind::kDimMismatch, "score files have different lengths");
    std::vector<double> column;
    column.reserve(system.size());
    for (std::size_t i = 0; i < system.size(); ++i) {
      if (system[i].model_id != base[i].model_id ||
          system[i].test_id != base[i].test_id)
        throw Error(ErrorKind::kDimMismatch,
                    "trial order differs at line " + std::to_string(i + 1));
      column.push_back(system[i].score);
    }
    columns.push_back(std::move(column));
  }

  std::vector<double> fused = scoring::fuse(columns);
  std::vector<formats::ScoreRecord> records(base.size());
  for (std::size_t i = 0; i < base.size(); ++i)
    records[i] = {base[i].model_id, base[i].test_id, fused[i], {}};
  formats::write_scores(out, records);
  std::cerr << "fused " << inputs.size() << " systems over " << base.size()
            << " trials\n";
  return 0;
}

// ---------------------------------------------------------------------------
// eval

struct EvalOptions {
  std::string scores;
  std::string key;
  double p_target = 0.01;
  double c_miss = 10.0;
  double c_fa = 1.0;
};

int cmd_eval(const EvalOptions& opt) {
  std::vector<formats::ScoreRecord> records = formats::read_scores(opt.scores);
  std::map<std::pair<std::string, std::string>, bool> key;
  for (const formats::KeyRecord& r : formats::read_key(opt.key))
    key[{r.model_id, r.test_id}] = r.target;

  metrics::ScoreSet set;
  for (const formats::ScoreRecord& r : records) {
    auto it = key.find({r.model_id, r.test_id});
    if (it == key.end())
      throw Error(ErrorKind::kUnresolvedId,
                  "trial " + r.model_id + " / " + r.test_id + " missing from key");
    (it->second ? set.targets : set.nontargets).push_back(r.score);
  }

  metrics::DcfParams dcf{opt.p_target, opt.c_miss, opt.c_fa};
  double e = metrics::eer(set);
  double d = metrics::min_dcf(set, dcf);

  char buf[160];
  std::snprintf(buf, sizeof buf, "trials: %zu (targets %zu, nontargets %zu)",
                set.targets.size() + set.nontargets.size(), set.targets.size(),
                set.nontargets.size());
  std::cout << buf << "\n";
  std::snprintf(buf, sizeof buf, "EER [%%]: %.2f", 100.0 * e);
  std::cout << buf << "\n";
  std::snprintf(buf, sizeof buf, "MinDCF (p_target=%g, c_miss=%g, c_fa=%g): %.4f",
                opt.p_target, opt.c_miss, opt.c_fa, d);
  std::cout << buf << "\n";
  std::snprintf(buf, sizeof buf, "eer=%.2f%%", 100.0 * e);
  std::cout << buf << "\n";
  std::snprintf(buf, sizeof buf, "mindcf=%.4f", d);
  std::cout << buf << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// synth

struct SynthOptions {
  std::string out_dir;
  trials::SynthConfig cfg;
};

int cmd_synth(const SynthOptions& opt) {
  trials::SynthData data = trials::synth_generate(opt.cfg);
  fs::create_directories(opt.out_dir);
  fs::path dir(opt.out_dir);

  std::vector<trials::Utterance> all_utterances;
  all_utterances.reserve(data.enroll_utterances.size() + data.test_utterances.size());
  for (const trials::Utterance& u : data.enroll_utterances) all_utterances.push_back(u);
  for (const trials::Utterance& u : data.test_utterances) all_utterances.push_back(u);

  std::vector<formats::EmbeddingRecord> embeddings;
  std::vector<formats::PhrasePosteriorRecord> posteriors;
  for (const trials::Utterance& u : all_utterances) {
    embeddings.push_back({u.id, u.embedding});
    if (u.phrase_posterior) posteriors.push_back({u.id, *u.phrase_posterior});
  }
  formats::write_embeddings((dir / "utts.emb").string(), embeddings);
  formats::write_phrase_posteriors((dir / "utts.ppo").string(), posteriors);

  std::vector<formats::EnrollmentRecord> enroll_records;
  for (const trials::EnrollmentModel& m : data.models)
    enroll_records.push_back({m.model_id, m.utterance_ids});
  formats::write_enroll_map((dir / "enroll.map").string(), enroll_records);

  std::vector<formats::TrialRecord> trial_records;
  std::vector<formats::KeyRecord> key_records;
  trial_records.reserve(data.trials.size());
  key_records.reserve(data.trials.size());
  for (const trials::Trial& t : data.trials) {
    trial_records.push_back({t.model_id, t.test_id});
    key_records.push_back(
        {t.model_id, t.test_id, trials::is_target(t.truth), trials::to_string(t.truth)});
  }
  formats::write_trial_list((dir / "trials.tsv").string(), trial_records);
  formats::write_key((dir / "key.tsv").string(), key_records);

  scoring::CohortSet cohort = trials::build_cohort(all_utterances);
  std::vector<formats::EmbeddingRecord> cohort_records;
  cohort_records.reserve(cohort.entries.size());
  for (scoring::CohortEntry& entry : cohort.entries)
    cohort_records.push_back({std::move(entry.id), std::move(entry.embedding)});
  formats::write_embeddings((dir / "cohort.emb").string(), cohort_records);

  std::cerr << "synthesized " << all_utterances.size() << " utterances, "
            << data.models.size() << " models, " << data.trials.size()
            << " trials in " << opt.out_dir << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// shapes

struct ShapesOptions {
  std::string arch = "tdnn-clp";
  long frames = 256;
  long classes = 0;
};

int cmd_shapes(const ShapesOptions& opt) {
  archshapes::ShapeReport report;
  if (opt.arch == "tdnn-clp") {
    report = archshapes::tdnn_shapes(opt.frames, archshapes::TdnnVariant::kClpEmbedding,
                                     opt.classes > 0 ? opt.classes : 963);
  } else if (opt.arch == "tdnn-phrase") {
    report =
        archshapes::tdnn_shapes(opt.frames, archshapes::TdnnVariant::kPhraseClassifier,
                                opt.classes > 0 ? opt.classes : 10);
  } else if (opt.arch == "resnet") {
    report = archshapes::resnet_shapes(opt.frames);
  } else {
    throw Error(ErrorKind::kBadConfig, "arch must be tdnn-clp, tdnn-phrase or resnet");
  }
  std::cout << archshapes::render_table(report);
  for (const std::string& line : archshapes::key_value_lines(report))
    std::cout << line << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"tdsv: text-dependent speaker verification back-end"};
  app.require_subcommand(1);
  app.set_config("--config", "", "line-oriented key = value configuration file");

  ExtractOptions extract_opt;
  CLI::App* extract = app.add_subcommand("extract", "WAV files to FMX1 feature files");
  extract->add_option("--in", extract_opt.in_dir, "directory of .wav files")->required();
  extract->add_option("--out", extract_opt.out_dir, "output directory")->required();
  extract->add_option("--mode", extract_opt.mode, "logmel or stft");
  extract->add_option("--window-ms", extract_opt.window_ms, "analysis window (ms)");
  extract->add_option("--hop-ms", extract_opt.hop_ms, "hop (ms)");
  extract->add_option("--n-fft", extract_opt.n_fft, "FFT size");
  extract->add_option("--n-mels", extract_opt.n_mels, "mel bands");
  extract->add_option("--log-floor", extract_opt.log_floor, "energy floor");
  extract->add_option("--crop-min", extract_opt.crop_min, "minimum crop length (frames)");
  extract->add_option("--crop-max", extract_opt.crop_max, "maximum crop length (frames)");
  extract->add_option("--seed", extract_opt.seed, "crop seed");

  PoolOptions pool_opt;
  CLI::App* pool = app.add_subcommand("pool", "FMX1 frames to EMB1 embeddings");
  pool->add_option("--frames", pool_opt.frames, "directory of .fmx files or one file")
      ->required();
  pool->add_option("--method", pool_opt.method, "sp, sap, gvp or clp");
  pool->add_option("--posteriors", pool_opt.posteriors,
                   "CPM1 directory or file (clp only)");
  pool->add_option("--params", pool_opt.params, "PRM1 parameter container");
  CLI::Option* seed_params_opt =
      pool->add_option("--seed-params", pool_opt.seed_params,
                       "generate parameters from this seed");
  pool->add_option("--tau", pool_opt.tau, "aggregation constant");
  pool->add_option("--proj-dim", pool_opt.proj_dim, "SAP projection rows");
  pool->add_option("--clusters", pool_opt.clusters, "GhostVLAD clusters");
  pool->add_option("--ghosts", pool_opt.ghosts, "GhostVLAD ghost clusters");
  pool->add_option("--d2", pool_opt.d2, "locally-connected output dim per block");
  pool->add_option("--activation", pool_opt.activation, "relu, tanh or identity");
  pool->add_option("--out", pool_opt.out, "output EMB1 file")->required();

  ScoreOptions score_opt;
  CLI::App* score = app.add_subcommand("score", "score a trial list");
  score->add_option("--trials", score_opt.trials, "trial list")->required();
  score->add_option("--enroll-map", score_opt.enroll_map, "model to utterances map")
      ->required();
  score->add_option("--embeddings", score_opt.embeddings, "EMB1 with all utterances")
      ->required();
  score->add_option("--cohort", score_opt.cohort, "EMB1 cohort for AS-Norm");
  score->add_option("--posteriors", score_opt.posteriors,
                    "PPO1 phrase posteriors for compensation");
  score->add_option("--alpha", score_opt.alpha, "compensation scale");
  score->add_option("--top-n", score_opt.top_n, "AS-Norm top-N");
  score->add_flag("--diagnostics", score_opt.diagnostics,
                  "append raw/spk_norm/phr columns");
  score->add_option("--out", score_opt.out, "output score TSV")->required();

  std::vector<std::string> fuse_inputs;
  std::string fuse_out;
  CLI::App* fuse = app.add_subcommand("fuse", "equal-weighted sum of score files");
  fuse->add_option("--in", fuse_inputs, "input score TSVs")->required()->expected(-1);
  fuse->add_option("--out", fuse_out, "output score TSV")->required();

  EvalOptions eval_opt;
  CLI::App* eval = app.add_subcommand("eval", "EER and MinDCF from scores and a key");
  eval->add_option("--scores", eval_opt.scores, "score TSV")->required();
  eval->add_option("--key", eval_opt.key, "trial key")->required();
  eval->add_option("--p-target", eval_opt.p_target, "DCF target prior");
  eval->add_option("--c-miss", eval_opt.c_miss, "DCF miss cost");
  eval->add_option("--c-fa", eval_opt.c_fa, "DCF false-alarm cost");

  SynthOptions synth_opt;
  CLI::App* synth = app.add_subcommand("synth", "synthetic speaker x phrase benchmark");
  synth->add_option("--out", synth_opt.out_dir, "output directory")->required();
  synth->add_option("--speakers", synth_opt.cfg.n_speakers, "speaker count");
  synth->add_option("--phrases", synth_opt.cfg.n_phrases, "phrase count");
  synth->add_option("--utts", synth_opt.cfg.utts_per_pair,
                    "test utterances per speaker-phrase pair");
  synth->add_option("--dim", synth_opt.cfg.embed_dim, "embedding dimension");
  synth->add_option("--speaker-scale", synth_opt.cfg.speaker_scale, "speaker spread");
  synth->add_option("--phrase-scale", synth_opt.cfg.phrase_scale, "phrase spread");
  synth->add_option("--noise-scale", synth_opt.cfg.noise_scale, "per-utterance noise");
  synth->add_option("--phrase-leak", synth_opt.cfg.phrase_leak,
                    "phrase content leaking into embeddings [0,1]");
  synth->add_option("--epsilon", synth_opt.cfg.posterior_epsilon,
                    "posterior mass off the true phrase");
  synth->add_option("--seed", synth_opt.cfg.seed, "generator seed");

  ShapesOptions shapes_opt;
  CLI::App* shapes = app.add_subcommand("shapes", "architecture output-size tables");
  shapes->add_option("--arch", shapes_opt.arch, "tdnn-clp, tdnn-phrase or resnet");
  shapes->add_option("--frames", shapes_opt.frames, "input frame count T");
  shapes->add_option("--classes", shapes_opt.classes,
                     "softmax classes (N speakers / M phrases)");

  CLI11_PARSE(app, argc, argv);
  pool_opt.have_seed_params = seed_params_opt->count() > 0;

  try {
    if (*extract) return cmd_extract(extract_opt);
    if (*pool) return cmd_pool(pool_opt);
    if (*score) return cmd_score(score_opt);
    if (*fuse) return cmd_fuse(fuse_inputs, fuse_out);
    if (*eval) return cmd_eval(eval_opt);
    if (*synth) return cmd_synth(synth_opt);
    if (*shapes) return cmd_shapes(shapes_opt);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
