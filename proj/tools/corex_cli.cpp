#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "corex/corex.h"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitCompute = 4;

struct Failure {
  int code;
  std::string message;
};

int exit_code_for(int status) {
  switch (status) {
    case COREX_ERR_CONVERGENCE:
    case COREX_ERR_INFEASIBLE:
      return kExitCompute;
    case COREX_ERR_NULL_ARG:
    case COREX_ERR_INTERNAL:
      return 1;
    default:
      return kExitData;
  }
}

void check(int status) {
  if (status != COREX_OK) {
    throw Failure{exit_code_for(status), std::string(corex_status_name(status)) + ": " + corex_last_error()};
  }
}

template <typename T, void (*Free)(T*)>
struct Deleter {
  void operator()(T* p) const { Free(p); }
};
using Graph = std::unique_ptr<corex_graph, Deleter<corex_graph, corex_graph_free>>;
using Decomp = std::unique_ptr<corex_decomp, Deleter<corex_decomp, corex_decomp_free>>;
using Scores = std::unique_ptr<corex_scores, Deleter<corex_scores, corex_scores_free>>;
using Partition = std::unique_ptr<corex_partition, Deleter<corex_partition, corex_partition_free>>;
using Instance = std::unique_ptr<corex_instance, Deleter<corex_instance, corex_instance_free>>;
using Experiment = std::unique_ptr<corex_experiment, Deleter<corex_experiment, corex_experiment_free>>;
using Text = std::unique_ptr<corex_text, Deleter<corex_text, corex_text_free>>;

std::string take(corex_text* t) {
  Text owned(t);
  return std::string(corex_text_data(t), corex_text_size(t));
}

std::string num(double x) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, r.ptr);
}

void write_text(const fs::path& path, const std::string& content) {
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Failure{kExitData, "cannot write " + path.string()};
    out << content;
    if (!out) throw Failure{kExitData, "cannot write " + path.string()};
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Failure{kExitData, "cannot write " + path.string()};
}

void prepare_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw Failure{kExitData, "cannot create output directory " + dir.string()};
}

void require_file(const std::string& path, const char* what) {
  std::error_code ec;
  if (!fs::is_regular_file(path, ec)) throw Failure{kExitData, std::string(what) + " not found: " + path};
}

void write_run_json(const fs::path& dir, const std::string& subcommand, json params) {
  json j;
  j["tool"] = "corex";
  j["version"] = corex_version();
  j["subcommand"] = subcommand;
  j["parameters"] = std::move(params);
  write_text(dir / "run.json", j.dump(2) + "\n");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& s, const char* what) {
  T v{};
  auto r = std::from_chars(s.data(), s.data() + s.size(), v);
  if (r.ec != std::errc() || r.ptr != s.data() + s.size()) {
    throw Failure{kExitUsage, std::string("invalid ") + what + ": '" + s + "'"};
  }
  return v;
}

std::vector<int> parse_rank_list(const std::string& s) {
  std::vector<int> out;
  for (const auto& item : split(s, ',')) {
    const auto dash = item.find('-');
    if (dash != std::string::npos && dash > 0) {
      const int lo = parse_number<int>(item.substr(0, dash), "rank range");
      const int hi = parse_number<int>(item.substr(dash + 1), "rank range");
      for (int r = lo; r <= hi; ++r) out.push_back(r);
    } else {
      out.push_back(parse_number<int>(item, "rank"));
    }
  }
  if (out.empty()) throw Failure{kExitUsage, "empty rank candidate list"};
  return out;
}

struct SynthFlags {
  int graphon = 1;
  std::optional<std::size_t> n_core;
  std::optional<std::size_t> n_periphery;
  std::string sizes = "balanced";
  std::string periphery = "er";
  double density = 0.02;
  double ratio = 1.0;
};

void add_synth_flags(CLI::App* app, SynthFlags& f) {
  app->add_option("--graphon", f.graphon, "Core graphon (1, 2 or 3)")->check(CLI::IsMember({1, 2, 3}));
  app->add_option("--n-core", f.n_core, "Core size (overrides --sizes)");
  app->add_option("--n-periphery", f.n_periphery, "Periphery size (overrides --sizes)");
  app->add_option("--sizes", f.sizes, "Size preset: balanced, small-core, large-core");
  app->add_option("--periphery", f.periphery, "Periphery type")->check(CLI::IsMember({"er", "config"}));
  app->add_option("--density", f.density, "Target mean edge density");
}

corex_synth_config resolve(const SynthFlags& f, std::uint64_t seed) {
  corex_synth_config cfg;
  corex_synth_config_init(&cfg);
  check(corex_size_preset(f.sizes.c_str(), &cfg.n_core, &cfg.n_periphery));
  if (f.n_core) cfg.n_core = *f.n_core;
  if (f.n_periphery) cfg.n_periphery = *f.n_periphery;
  cfg.graphon = f.graphon;
  cfg.periphery = f.periphery == "config" ? COREX_PERIPHERY_CONFIG : COREX_PERIPHERY_ER;
  cfg.density = f.density;
  cfg.degree_ratio = f.ratio;
  cfg.seed = seed;
  return cfg;
}

json config_json(const corex_synth_config& c) {
  return {{"graphon", c.graphon},
          {"n_core", c.n_core},
          {"n_periphery", c.n_periphery},
          {"periphery", c.periphery == COREX_PERIPHERY_CONFIG ? "config" : "er"},
          {"density", c.density},
          {"degree_ratio", c.degree_ratio},
          {"seed", c.seed}};
}

// generate

struct GenerateFlags {
  SynthFlags synth;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void cmd_generate(const GenerateFlags& f) {
  const auto cfg = resolve(f.synth, f.seed);
  const fs::path dir(f.out_dir);
  prepare_dir(dir);
  write_run_json(dir, "generate", config_json(cfg));
  corex_instance* raw = nullptr;
  check(corex_generate(&cfg, &raw));
  Instance inst(raw);
  check(corex_instance_write(inst.get(), dir.string().c_str()));
}

// identify

struct IdentifyFlags {
  std::string input;
  std::string model = "er";
  std::string rank = "auto";
  std::string select = "kmeans";
  double eps = 0.01;
  std::string candidates = "1-8";
  int folds = 3;
  double holdout = 0.1;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void cmd_identify(const IdentifyFlags& f) {
  std::optional<int> fixed_rank;
  if (f.rank != "auto") {
    fixed_rank = parse_number<int>(f.rank, "rank");
    if (*fixed_rank < 1) throw Failure{kExitUsage, "--rank must be positive or 'auto'"};
  }
  std::optional<std::size_t> topk;
  if (f.select.rfind("topk:", 0) == 0) {
    topk = parse_number<std::size_t>(f.select.substr(5), "top-k size");
  } else if (f.select != "threshold" && f.select != "kmeans") {
    throw Failure{kExitUsage, "--select must be topk:<N>, threshold or kmeans"};
  }
  const std::vector<int> cands = parse_rank_list(f.candidates);
  require_file(f.input, "input graph");

  const fs::path dir(f.out_dir);
  prepare_dir(dir);
  json params = {{"input", f.input}, {"model", f.model}, {"rank", f.rank},   {"select", f.select},
                 {"eps", f.eps},     {"seed", f.seed},   {"candidates", cands}, {"folds", f.folds},
                 {"holdout", f.holdout}};
  write_run_json(dir, "identify", params);

  corex_graph* graw = nullptr;
  check(corex_graph_load(f.input.c_str(), &graw));
  Graph g(graw);
  const std::size_t n = corex_graph_num_nodes(g.get());
  if (corex_graph_num_edges(g.get()) == 0) throw Failure{kExitData, "graph has no edges"};
  double p_hat = 0.0;
  check(corex_graph_density(g.get(), &p_hat));

  json report;
  report["num_nodes"] = n;
  report["num_edges"] = corex_graph_num_edges(g.get());
  report["density"] = p_hat;

  int r = 0;
  if (fixed_rank) {
    r = *fixed_rank;
  } else {
    corex_text* rep = nullptr;
    check(corex_select_rank(g.get(), cands.data(), cands.size(), f.folds, f.holdout, f.seed, &r, &rep));
    report["rank_selection"] = json::parse(take(rep));
  }
  report["rank"] = r;

  corex_decomp* draw = nullptr;
  check(corex_eigs(g.get(), r, f.seed, &draw));
  Decomp dec(draw);
  std::vector<double> ev(static_cast<std::size_t>(r));
  check(corex_decomp_eigenvalues(dec.get(), ev.data(), ev.size()));
  report["eigenvalues"] = ev;

  corex_scores* sraw = nullptr;
  check(corex_scores_compute(dec.get(), g.get(), f.model == "config" ? COREX_MODEL_CONFIG : COREX_MODEL_ER, &sraw));
  Scores scores(sraw);

  std::vector<std::size_t> excluded(corex_scores_num_excluded(scores.get()));
  if (!excluded.empty()) {
    check(corex_scores_excluded(scores.get(), excluded.data(), excluded.size()));
    std::cerr << "warning: " << excluded.size()
              << " zero-degree node(s) classified as periphery without scoring (see identify.json)\n";
  }
  report["excluded"] = excluded;

  corex_partition* praw = nullptr;
  if (topk) {
    check(corex_select_topk(scores.get(), *topk, &praw));
  } else if (f.select == "threshold") {
    check(corex_select_threshold(scores.get(), p_hat, f.eps, &praw));
  } else {
    check(corex_select_kmeans(scores.get(), &praw));
  }
  Partition part(praw);
  report["selection"] = f.select;
  report["n_core"] = corex_partition_n_core(part.get());
  double cutoff = 0.0;
  report["cutoff"] = corex_partition_cutoff(part.get(), &cutoff) ? json(cutoff) : json(nullptr);

  check(corex_scores_write_csv(scores.get(), (dir / "scores.csv").string().c_str()));
  check(corex_partition_write_csv(part.get(), scores.get(), (dir / "partition.csv").string().c_str()));
  write_text(dir / "identify.json", report.dump(2) + "\n");
}

// bench

struct BenchFlags {
  std::string preset;
  SynthFlags synth;
  std::string ratios;
  std::string methods = "all";
  int replicates = 20;
  std::string rank = "auto";
  std::uint64_t seed = 0;
  std::string out_dir;
};

std::string file_tag(double ratio) {
  std::string s = num(ratio);
  for (auto& c : s) {
    if (c == '.') c = 'p';
  }
  return s;
}

void cmd_bench(BenchFlags f) {
  std::vector<double> ratios;
  if (!f.preset.empty()) {
    const auto parts = split(f.preset, '-');
    const bool ok = parts.size() == 2 && (parts[0] == "fig2" || parts[0] == "fig3") &&
                    (parts[1] == "g1" || parts[1] == "g2" || parts[1] == "g3");
    if (!ok) throw Failure{kExitUsage, "unknown preset '" + f.preset + "' (fig2-g1..g3, fig3-g1..g3)"};
    f.synth.periphery = parts[0] == "fig2" ? "er" : "config";
    f.synth.graphon = parts[1][1] - '0';
    ratios = {1.0, 2.0, 3.0};
  }
  if (!f.ratios.empty()) {
    ratios.clear();
    for (const auto& s : split(f.ratios, ',')) ratios.push_back(parse_number<double>(s, "ratio"));
  }
  if (ratios.empty()) ratios = {1.0};
  int rank = 0;
  if (f.rank != "auto") {
    rank = parse_number<int>(f.rank, "rank");
    if (rank < 1) throw Failure{kExitUsage, "--rank must be positive or 'auto'"};
  }
  if (f.replicates < 1) throw Failure{kExitUsage, "--replicates must be positive"};

  std::vector<std::string> methods;
  {
    const std::string list = f.methods == "all" ? corex_method_names() : f.methods;
    methods = split(list, ',');
  }

  const fs::path dir(f.out_dir);
  prepare_dir(dir);
  const auto base = resolve(f.synth, f.seed);
  json params = config_json(base);
  params.erase("degree_ratio");
  params["preset"] = f.preset.empty() ? json(nullptr) : json(f.preset);
  params["ratios"] = ratios;
  params["methods"] = methods;
  params["replicates"] = f.replicates;
  params["rank"] = f.rank;
  write_run_json(dir, "bench", params);

  std::string method_list;
  for (const auto& m : methods) method_list += (method_list.empty() ? "" : ",") + m;

  json summary;
  summary["preset"] = params["preset"];
  summary["runs"] = json::array();
  for (double ratio : ratios) {
    auto cfg = base;
    cfg.degree_ratio = ratio;
    corex_experiment* eraw = nullptr;
    check(corex_bench_run(&cfg, method_list.c_str(), f.replicates, rank, &eraw));
    Experiment e(eraw);
    corex_text* t = nullptr;
    check(corex_experiment_summary_json(e.get(), &t));
    json run = json::parse(take(t));
    run["degree_ratio"] = ratio;
    summary["runs"].push_back(std::move(run));
    for (const auto& m : methods) {
      corex_text* csv = nullptr;
      check(corex_experiment_roc_csv(e.get(), m.c_str(), &csv));
      write_text(dir / ("roc_" + m + "_ratio" + file_tag(ratio) + ".csv"), take(csv));
    }
  }
  write_text(dir / "summary.json", summary.dump(2) + "\n");
}

// diagnose

struct DiagnoseFlags {
  std::string truth_p;
  std::string input;
  std::string truth;
  int rank = 3;
  bool require_h = false;
  std::string sweep;
  double level = 0.05;
  std::uint64_t seed = 0;
  std::string out_dir;
};

void cmd_diagnose(const DiagnoseFlags& f) {
  if (f.truth_p.empty() == f.input.empty()) throw Failure{kExitUsage, "give exactly one of --truth-p or --input"};
  if (f.require_h && f.input.size() && f.truth.empty()) {
    throw Failure{kExitData, "h(n) requested but no core labels given (--truth)"};
  }
  std::vector<std::size_t> sizes;
  for (const auto& s : split(f.sweep, ',')) sizes.push_back(parse_number<std::size_t>(s, "sweep size"));
  std::string meta;
  if (!f.truth_p.empty()) {
    require_file(f.truth_p, "metadata");
    std::ifstream in(f.truth_p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    meta = ss.str();
  } else {
    require_file(f.input, "input graph");
    if (!f.truth.empty()) require_file(f.truth, "truth file");
  }

  // Inputs are parsed before anything is written, so a bad file leaves no output behind.
  Graph g;
  std::vector<unsigned char> labels;
  if (!f.input.empty()) {
    corex_graph* graw = nullptr;
    check(corex_graph_load(f.input.c_str(), &graw));
    g.reset(graw);
    if (!f.truth.empty()) {
      labels.resize(corex_graph_num_nodes(g.get()));
      check(corex_truth_load(f.truth.c_str(), labels.size(), labels.data(), labels.size()));
    }
  }

  const fs::path dir(f.out_dir);
  prepare_dir(dir);
  json params = {{"truth_p", f.truth_p.empty() ? json(nullptr) : json(f.truth_p)},
                 {"input", f.input.empty() ? json(nullptr) : json(f.input)},
                 {"truth", f.truth.empty() ? json(nullptr) : json(f.truth)},
                 {"rank", f.rank},
                 {"require_h", f.require_h},
                 {"sweep", sizes},
                 {"level", f.level},
                 {"seed", f.seed}};
  write_run_json(dir, "diagnose", params);

  corex_text* t = nullptr;
  if (g) {
    check(corex_diagnose_graph(g.get(), f.rank, f.seed, labels.empty() ? nullptr : labels.data(), &t));
  } else {
    check(corex_diagnose_meta(meta.c_str(), f.rank, 1, &t));
  }
  const std::string diag = take(t);
  if (f.require_h && json::parse(diag)["h_n"].is_null()) {
    throw Failure{kExitData, "h(n) requested but the labels name no core node"};
  }
  std::string gap_csv;
  if (!sizes.empty()) {
    corex_text* s = nullptr;
    check(corex_eigengap_sweep(sizes.data(), sizes.size(), f.level, &s));
    gap_csv = take(s);
  }
  write_text(dir / "diagnostics.json", diag);
  if (!gap_csv.empty()) write_text(dir / "eigengap.csv", gap_csv);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"corex: core identification in networks with uninformative peripheries"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "Worker threads (0 = all cores); outputs do not depend on it")
      ->check(CLI::NonNegativeNumber);

  GenerateFlags gen;
  auto* g = app.add_subcommand("generate", "Sample a synthetic core-periphery network");
  add_synth_flags(g, gen.synth);
  g->add_option("--ratio", gen.synth.ratio, "Core over periphery mean expected degree");
  g->add_option("--seed", gen.seed, "Master seed");
  g->add_option("--out-dir", gen.out_dir, "Output directory")->required();
  g->add_option("--threads", threads, "Worker threads");

  IdentifyFlags id;
  auto* i = app.add_subcommand("identify", "Score nodes and split core from periphery");
  i->add_option("--input", id.input, "Edge list")->required();
  i->add_option("--model", id.model, "Periphery model")->check(CLI::IsMember({"er", "config"}));
  i->add_option("--rank", id.rank, "Rank or 'auto' for edge cross-validation");
  i->add_option("--select", id.select, "topk:<N>, threshold or kmeans");
  i->add_option("--eps", id.eps, "Threshold exponent slack");
  i->add_option("--candidates", id.candidates, "Ranks tried by 'auto', e.g. 1-8 or 1,2,4");
  i->add_option("--folds", id.folds, "Cross-validation folds");
  i->add_option("--holdout", id.holdout, "Held-out pair fraction per fold");
  i->add_option("--seed", id.seed, "Master seed");
  i->add_option("--out-dir", id.out_dir, "Output directory")->required();
  i->add_option("--threads", threads, "Worker threads");

  BenchFlags bench;
  auto* b = app.add_subcommand("bench", "Compare methods by ROC over replicated synthetic networks");
  b->add_option("--preset", bench.preset, "fig2-g1..g3 (ER periphery) or fig3-g1..g3 (config periphery)");
  add_synth_flags(b, bench.synth);
  b->add_option("--ratios", bench.ratios, "Comma list of degree ratios");
  b->add_option("--methods", bench.methods, std::string("Comma list from ") + corex_method_names());
  b->add_option("--replicates", bench.replicates, "Replicates per ratio");
  b->add_option("--rank", bench.rank, "Rank or 'auto'");
  b->add_option("--seed", bench.seed, "Master seed");
  b->add_option("--out-dir", bench.out_dir, "Output directory")->required();
  b->add_option("--threads", threads, "Worker threads");

  DiagnoseFlags diag;
  auto* d = app.add_subcommand("diagnose", "Spectral diagnostics and eigengap sweeps");
  d->add_option("--truth-p", diag.truth_p, "meta.json of a generated network");
  d->add_option("--input", diag.input, "Edge list for empirical spectra");
  d->add_option("--truth", diag.truth, "Core labels for --input");
  d->add_option("--rank", diag.rank, "Rank r for the reported gap");
  d->add_flag("--require-h", diag.require_h, "Fail unless h(n) can be computed");
  d->add_option("--sweep", diag.sweep, "Periphery sizes for the eigengap sweep, e.g. 0,500,1000");
  d->add_option("--level", diag.level, "Periphery edge probability in the sweep");
  d->add_option("--seed", diag.seed, "Seed");
  d->add_option("--out-dir", diag.out_dir, "Output directory")->required();
  d->add_option("--threads", threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  try {
    check(corex_set_threads(threads));
    if (*g) {
      cmd_generate(gen);
    } else if (*i) {
      cmd_identify(id);
    } else if (*b) {
      cmd_bench(bench);
    } else if (*d) {
      cmd_diagnose(diag);
    }
  } catch (const Failure& e) {
    std::cerr << "corex: " << e.message << '\n';
    return e.code;
  } catch (const std::exception& e) {
    std::cerr << "corex: " << e.what() << '\n';
    return 1;
  }
  return kExitOk;
}
