#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <span>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gsfw/pipeline.hpp"
#include "gsfw/report.hpp"
#include "gsfw/sparsifier.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitNotConverged = 2;

struct CommonOpts {
  std::string input;
  std::string out;
  std::string out_csv;
  double eps = 0.05;
  double eta = 0.5;
  double p = 0.0;
  int reps = 10;
  long max_iters = 1000000;
  std::uint64_t seed = 1;
  std::optional<double> tau;
  double sparsify_scale = 4.0;
  bool shadow = false;
  int lanczos_cap = 0;
  std::string checkpoint;
  long checkpoint_every = 0;
  std::string resume;
};

// Flat "key = value" config support: --config FILE anywhere after the
// subcommand injects "--key value" pairs for keys the command line does not
// already carry, so explicit flags always win.
std::vector<std::string> apply_flat_config(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::string path;
  std::size_t at = 0;
  for (std::size_t i = 1; i < args.size(); ++i) {
    if (args[i] == "--config" && i + 1 < args.size()) {
      path = args[i + 1];
      args.erase(args.begin() + static_cast<long>(i), args.begin() + static_cast<long>(i) + 2);
      at = i;
      break;
    }
    if (args[i].rfind("--config=", 0) == 0) {
      path = args[i].substr(9);
      args.erase(args.begin() + static_cast<long>(i));
      at = i;
      break;
    }
  }
  if (path.empty()) return args;

  std::vector<std::string> present;
  for (const std::string& a : args)
    if (a.rfind("--", 0) == 0) present.push_back(a.substr(2, a.find('=') - 2));

  std::vector<std::string> injected;
  for (const auto& [key, val] : gsfw::parse_config_file(path)) {
    bool user_set = false;
    for (const std::string& p : present) user_set |= (p == key);
    if (user_set) continue;
    injected.push_back("--" + key);
    if (!val.empty()) injected.push_back(val);
  }
  args.insert(args.begin() + static_cast<long>(at), injected.begin(), injected.end());
  return args;
}

void add_common(CLI::App* cmd, CommonOpts& o, bool needs_input) {
  auto* in = cmd->add_option("--input", o.input, "input file");
  if (needs_input) in->required();
  cmd->add_option("--eps", o.eps, "target accuracy epsilon");
  cmd->add_option("--eta", o.eta, "LMO accuracy parameter in (0,1)");
  cmd->add_option("--p", o.p, "LMO failure probability (0 = theory default eps/T)");
  cmd->add_option("--reps", o.reps, "rounding replications");
  cmd->add_option("--max-iters", o.max_iters, "iteration budget");
  cmd->add_option("--seed", o.seed, "RNG seed");
  cmd->add_option("--tau", o.tau, "sparsify the input to tau-spectral closeness first");
  cmd->add_option("--sparsify-scale", o.sparsify_scale, "budget constant c in c n log(n)/tau^2");
  cmd->add_option("--lanczos-cap", o.lanczos_cap, "hard cap on Lanczos iterations (0 = theory)");
  cmd->add_flag("--shadow", o.shadow, "maintain a dense shadow iterate (verification)");
  cmd->add_option("--out", o.out, "write the report as JSON here (default stdout)");
  cmd->add_option("--out-csv", o.out_csv, "also write a one-row CSV here");
  cmd->add_option("--checkpoint", o.checkpoint, "write resumable solver state to this path");
  cmd->add_option("--checkpoint-every", o.checkpoint_every, "iterations between checkpoints");
  cmd->add_option("--resume", o.resume,
                  "continue from a checkpoint (--max-iters counts further iterations)");
}

gsfw::RunConfig to_run_config(const CommonOpts& o, gsfw::ProblemKind kind) {
  gsfw::RunConfig cfg;
  cfg.kind = kind;
  cfg.eps = o.eps;
  cfg.eta = o.eta;
  cfg.p_override = o.p;
  cfg.reps = o.reps;
  cfg.max_iters = o.max_iters;
  cfg.seed = o.seed;
  cfg.tau = o.tau;
  cfg.sparsify_scale = o.sparsify_scale;
  cfg.shadow = o.shadow;
  cfg.lanczos_cap = o.lanczos_cap;
  cfg.checkpoint_path = o.checkpoint;
  cfg.checkpoint_every = o.checkpoint_every > 0 ? o.checkpoint_every : (o.checkpoint.empty() ? 0 : 10000);
  cfg.resume_from = o.resume;
  return cfg;
}

int emit(const gsfw::RunReport& rep, const CommonOpts& o) {
  const std::string json = gsfw::report_to_json(rep);
  if (o.out.empty()) {
    std::cout << json << '\n';
  } else {
    std::ofstream f(o.out);
    if (!f) {
      std::cerr << "error: cannot write " << o.out << '\n';
      return kExitError;
    }
    f << json << '\n';
  }
  if (!o.out_csv.empty()) {
    std::ofstream f(o.out_csv);
    if (!f) {
      std::cerr << "error: cannot write " << o.out_csv << '\n';
      return kExitError;
    }
    f << gsfw::reports_to_csv({rep});
  }
  return rep.converged ? kExitOk : kExitNotConverged;
}

std::string basename_of(const std::string& path) {
  auto pos = path.find_last_of("/\\");
  return pos == std::string::npos ? path : path.substr(pos + 1);
}

// Published benchmark rows used by the opt-in long suite: approximation
// ratios at eps = 0.05 plus the instance shape for input validation.
struct ReferenceRow {
  const char* instance;
  int n;
  std::size_t e_plus;   // |E+| (maxagree) or |E| (maxkcut)
  std::size_t e_minus;  // |E-| (maxagree only)
  int k;                // 0 for maxagree
  double ar;
};

constexpr ReferenceRow kMaxAgreeReference[] = {
    {"G1", 800, 2453, 16627, 0, 0.757},  {"G11", 800, 817, 783, 0, 0.693},
    {"G14", 800, 3861, 797, 0, 0.866},   {"G22", 2000, 115, 19849, 0, 0.764},
    {"G32", 2000, 2011, 1989, 0, 0.609}, {"G43", 1000, 248, 9704, 0, 0.766},
    {"G48", 3000, 0, 6000, 0, 0.769},    {"G51", 1000, 4734, 1147, 0, 0.66},
    {"G55", 5000, 66, 12432, 0, 0.724},  {"G57", 5000, 4981, 5019, 0, 0.565},
};

constexpr ReferenceRow kMaxKCutReference[] = {
    {"G1", 800, 19176, 0, 3, 0.9127}, {"G1", 800, 19176, 0, 4, 0.9},
    {"G2", 800, 19176, 0, 3, 0.917},  {"G3", 800, 19176, 0, 3, 0.916},
    {"G14", 800, 4694, 0, 4, 0.844},  {"G22", 2000, 19990, 0, 4, 0.851},
    {"G43", 1000, 9990, 0, 3, 0.862}, {"G47", 1000, 9990, 0, 3, 0.863},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Low-memory SDP solver for Max-k-Cut and Max-Agree"};
  app.require_subcommand(1);

  CommonOpts kc, ma, ls;
  int kparts = 2;
  int ma_samples = 2;
  bool jaccard = false;
  double jaccard_delta = 0.05;

  auto* cmd_kcut = app.add_subcommand("maxkcut", "approximate Max-k-Cut on a GSet file");
  add_common(cmd_kcut, kc, true);
  cmd_kcut->add_option("--k", kparts, "number of parts (>= 2)");

  auto* cmd_ma = app.add_subcommand("maxagree", "approximate Max-Agree correlation clustering");
  add_common(cmd_ma, ma, true);
  std::string emit_signed;
  cmd_ma->add_flag("--jaccard", jaccard, "input is a GSet file; derive signs via the Jaccard rule");
  cmd_ma->add_option("--delta", jaccard_delta, "Jaccard smoothing delta");
  cmd_ma->add_option("--samples", ma_samples, "Gaussian samples per rounding (2 or 3)");
  cmd_ma->add_option("--emit-signed", emit_signed,
                     "also write the signed instance as JSON lines to this path");

  int sp_n = 0;
  double sp_tau = 0.3, sp_scale = 4.0;
  std::uint64_t sp_seed = 1;
  std::size_t sp_budget = 0;
  auto* cmd_sp = app.add_subcommand("sparsify", "stream \"i j w\" lines (1-indexed) from stdin");
  cmd_sp->add_option("--n", sp_n, "vertex count")->required();
  cmd_sp->add_option("--tau", sp_tau, "target spectral closeness");
  cmd_sp->add_option("--scale", sp_scale, "budget constant c");
  cmd_sp->add_option("--budget", sp_budget, "explicit edge budget (overrides the formula)");
  cmd_sp->add_option("--seed", sp_seed, "RNG seed");

  std::vector<std::string> merge_inputs;
  std::string merge_csv, merge_json;
  auto* cmd_rep = app.add_subcommand("report", "merge JSON reports into CSV / JSON tables");
  cmd_rep->add_option("inputs", merge_inputs, "JSON report files")->required();
  cmd_rep->add_option("--csv", merge_csv, "CSV output path (default stdout)");
  cmd_rep->add_option("--json", merge_json, "combined JSON output path");

  std::string ls_problem = "maxagree", ls_dir, ls_instances;
  auto* cmd_ls = app.add_subcommand(
      "long-suite", "opt-in benchmark reproduction against published rows (hours of runtime)");
  cmd_ls->add_option("--gset-dir", ls_dir, "directory holding GSet instance files")->required();
  cmd_ls->add_option("--instances", ls_instances, "comma-separated list, e.g. G1,G11")->required();
  cmd_ls->add_option("--problem", ls_problem, "maxagree or maxkcut");
  add_common(cmd_ls, ls, false);
  int ls_k = 3;
  cmd_ls->add_option("--k", ls_k, "parts for maxkcut rows");

  try {
    std::vector<std::string> args = apply_flat_config(argc, argv);
    args.erase(args.begin());             // drop the program name
    std::reverse(args.begin(), args.end());  // CLI11 wants reversed args
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitError;
  }

  try {
    if (cmd_kcut->parsed()) {
      gsfw::WeightedGraph g = gsfw::load_gset_file(kc.input);
      gsfw::RunConfig cfg = to_run_config(kc, gsfw::ProblemKind::MaxKCut);
      cfg.k = kparts;
      cfg.dataset = basename_of(kc.input);
      return emit(gsfw::run_maxkcut(g, cfg).report, kc);
    }

    if (cmd_ma->parsed()) {
      gsfw::RunConfig cfg = to_run_config(ma, gsfw::ProblemKind::MaxAgree);
      cfg.ma_samples = ma_samples;
      cfg.dataset = basename_of(ma.input);
      gsfw::SignedGraph sg = jaccard
                                 ? gsfw::jaccard_signed_graph(gsfw::load_gset_file(ma.input),
                                                              jaccard_delta)
                                 : gsfw::load_signed_jsonl_file(ma.input);
      if (!emit_signed.empty()) {
        std::ofstream f(emit_signed);
        if (!f) throw std::runtime_error("cannot write " + emit_signed);
        f << gsfw::serialize_signed_jsonl(sg);
      }
      return emit(gsfw::run_maxagree(sg, cfg).report, ma);
    }

    if (cmd_sp->parsed()) {
      gsfw::SparsifierState st(sp_n, sp_tau, sp_seed, sp_scale, sp_budget);
      std::string line;
      while (std::getline(std::cin, line)) {
        if (line.find_first_not_of(" \t\r\n") == std::string::npos) continue;
        std::istringstream es(line);
        long i = 0, j = 0;
        double w = 0.0;
        if (!(es >> i >> j >> w)) throw gsfw::ParseError("bad stream line: " + line);
        st.ingest(gsfw::Edge{static_cast<int>(i) - 1, static_cast<int>(j) - 1, w});
      }
      std::cout << gsfw::serialize_gset(st.finalize());
      return kExitOk;
    }

    if (cmd_rep->parsed()) {
      std::vector<gsfw::RunReport> all;
      for (const std::string& path : merge_inputs)
        for (gsfw::RunReport& r : gsfw::reports_from_json_file(path)) all.push_back(std::move(r));
      const std::string csv = gsfw::reports_to_csv(all);
      if (merge_csv.empty()) {
        std::cout << csv;
      } else {
        std::ofstream f(merge_csv);
        if (!f) throw std::runtime_error("cannot write " + merge_csv);
        f << csv;
      }
      if (!merge_json.empty()) {
        std::ofstream f(merge_json);
        if (!f) throw std::runtime_error("cannot write " + merge_json);
        f << gsfw::reports_to_json(all) << '\n';
      }
      return kExitOk;
    }

    if (cmd_ls->parsed()) {
      const bool is_ma = ls_problem == "maxagree";
      if (!is_ma && ls_problem != "maxkcut")
        throw std::runtime_error("--problem must be maxagree or maxkcut");
      bool all_ok = true;
      std::vector<gsfw::RunReport> rows;
      std::stringstream names(ls_instances);
      std::string name;
      while (std::getline(names, name, ',')) {
        const ReferenceRow* ref = nullptr;
        const std::span<const ReferenceRow> table =
            is_ma ? std::span<const ReferenceRow>(kMaxAgreeReference)
                  : std::span<const ReferenceRow>(kMaxKCutReference);
        for (const ReferenceRow& row : table) {
          if (name == row.instance && (is_ma || row.k == ls_k)) {
            ref = &row;
            break;
          }
        }
        if (!ref) throw std::runtime_error("no published row for " + name);

        gsfw::WeightedGraph g = gsfw::load_gset_file(ls_dir + "/" + name);
        gsfw::RunReport rep;
        if (is_ma) {
          gsfw::SignedGraph sg = gsfw::jaccard_signed_graph(g, 0.05);
          if (sg.plus_edges.size() != ref->e_plus || sg.minus_edges.size() != ref->e_minus) {
            std::cerr << name << ": signed conversion gives |E+|=" << sg.plus_edges.size()
                      << " |E-|=" << sg.minus_edges.size() << ", published row has "
                      << ref->e_plus << "/" << ref->e_minus << '\n';
            all_ok = false;
            continue;
          }
          gsfw::RunConfig cfg = to_run_config(ls, gsfw::ProblemKind::MaxAgree);
          cfg.dataset = name;
          rep = gsfw::run_maxagree(sg, cfg).report;
        } else {
          if (g.edges.size() != ref->e_plus || g.n != ref->n) {
            std::cerr << name << ": instance has n=" << g.n << " |E|=" << g.edges.size()
                      << ", published row has " << ref->n << "/" << ref->e_plus << '\n';
            all_ok = false;
            continue;
          }
          gsfw::RunConfig cfg = to_run_config(ls, gsfw::ProblemKind::MaxKCut);
          cfg.k = ls_k;
          cfg.dataset = name;
          rep = gsfw::run_maxkcut(g, cfg).report;
        }
        const double dev = std::abs(rep.ar - ref->ar);
        const bool ok = rep.converged && dev <= 0.05;
        std::cout << name << ": AR=" << rep.ar << " published=" << ref->ar << " |diff|=" << dev
                  << (ok ? "  within band" : "  OUT OF BAND") << '\n';
        all_ok = all_ok && ok;
        rows.push_back(std::move(rep));
      }
      if (!rows.empty() && !ls.out.empty()) {
        std::ofstream f(ls.out);
        if (!f) throw std::runtime_error("cannot write " + ls.out);
        f << gsfw::reports_to_json(rows) << '\n';
      }
      return all_ok ? kExitOk : kExitNotConverged;
    }
  } catch (const std::exception& ex) {
    std::cerr << "error: " << ex.what() << '\n';
    return kExitError;
  }
  return kExitError;
}
