// Command-line front end: counting experiments, volume estimation,
// Rogers terms, random-lattice sampling, density search, Lie-algebra
// verification, and canned recipes. CSV output carries a '#'-prefixed
// JSON header with the full configuration; identical configurations
// produce identical bytes (timings are zeroed unless --timings).

#include <CLI11.hpp>
#include <cstdio>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include "symp/density.hpp"
#include "symp/enumeration.hpp"
#include "symp/json_io.hpp"
#include "symp/lie.hpp"
#include "symp/randlat.hpp"
#include "symp/recipes.hpp"
#include "symp/rogers.hpp"
#include "symp/volume.hpp"

namespace {

using namespace symp;

std::vector<double> parse_double_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stod(item));
  return out;
}

std::vector<std::int64_t> parse_int_list(const std::string& s) {
  std::vector<std::int64_t> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(std::stoll(item));
  return out;
}

IntervalGrid build_grid(int k, const std::vector<std::string>& intervals,
                        const std::vector<double>& interval_all) {
  if (!interval_all.empty()) {
    if (interval_all.size() != 2)
      throw Error("interval-all needs exactly two numbers");
    return IntervalGrid::uniform(k, interval_all[0], interval_all[1]);
  }
  if (intervals.empty()) throw Error("no intervals given");
  std::vector<std::pair<double, double>> bounds(
      std::size_t(k) * (k - 1) / 2,
      {std::numeric_limits<double>::quiet_NaN(), 0.0});
  IntervalGrid probe = IntervalGrid::uniform(k, 0.0, 1.0);
  for (const auto& spec : intervals) {
    auto vals = parse_double_list(spec);
    if (vals.size() != 4)
      throw Error("interval must be 'i,j,a,b': got '" + spec + "'");
    int i = int(vals[0]), j = int(vals[1]);
    bounds[probe.pair_index(i, j)] = {vals[2], vals[3]};
  }
  for (auto& [a, b] : bounds)
    if (std::isnan(a)) throw Error("interval grid incomplete");
  return IntervalGrid(k, std::move(bounds));
}

VectorClass build_class(const std::string& name, const std::string& v0_str,
                        std::int64_t modulus) {
  if (name == "all") return VectorClass::all();
  if (name == "primitive") return VectorClass::primitive();
  if (name == "congruence") {
    if (v0_str.empty()) throw Error("congruence class needs --v0");
    return VectorClass::congruence(parse_int_list(v0_str), modulus);
  }
  throw Error("unknown class '" + name + "'");
}

std::string elapsed_cell(double seconds, bool timings) {
  return timings ? format_double(seconds) : "0";
}

json load_json_arg(const std::string& arg) {
  // file path or inline JSON
  if (!arg.empty() && (arg[0] == '{' || arg[0] == '[')) return json::parse(arg);
  std::ifstream in(arg);
  if (!in) throw Error("cannot open " + arg);
  json j;
  in >> j;
  return j;
}

// ------------------------------------------------------------- count

struct CountArgs {
  std::string form_path;
  int k = 2;
  std::vector<std::string> intervals;
  std::vector<double> interval_all;
  std::string t_list = "6,8,10,12";
  std::string cls = "all";
  std::string v0;
  std::int64_t modulus = 1;
  int threads = 0;
  std::uint64_t seed = 0;
  double cg = 0;
  bool cg_given = false;
  std::int64_t cg_samples = 0;
  bool include_zero = false;
  std::int64_t max_points = 20'000'000;
  bool timings = false;
  std::string out = "-";
};

int run_count(const CountArgs& a) {
  auto loaded = load_form_file(a.form_path);
  auto grid = build_grid(a.k, a.intervals, a.interval_all);
  auto cls = build_class(a.cls, a.v0, a.modulus);
  auto Ts = parse_double_list(a.t_list);
  if (Ts.empty()) throw Error("empty T list");

  std::optional<double> cg;
  if (a.cg_given) cg = a.cg;
  if (a.cg_samples > 0) {
    Rng rng(a.seed);
    cg = estimate_cg(loaded.form, a.k, a.cg_samples, rng, a.threads).value;
  }

  json header = {{"cmd", "count"},       {"form", a.form_path},
                 {"k", a.k},             {"class", a.cls},
                 {"seed", a.seed},       {"threads", a.threads},
                 {"include_zero", a.include_zero}};
  if (cg) header["cg"] = *cg;
  CsvWriter csv(a.out, header, {"T", "count", "main_term", "ratio",
                                "elapsed_s"});
  const int n = loaded.form.n();
  for (double T : Ts) {
    CountQuery q(loaded.form, grid, T, cls);
    q.threads = a.threads;
    q.options.include_zero = a.include_zero;
    q.options.max_points = a.max_points;
    CountReport rep = count_tuples(q);
    if (cg)
      rep.attach_main_term(*cg * grid.width_product() *
                           std::pow(T, double(theoretical_exponent(n, a.k))));
    csv.row({format_double(T), std::to_string(rep.count),
             rep.main_term ? format_double(*rep.main_term) : "",
             rep.ratio ? format_double(*rep.ratio) : "",
             elapsed_cell(rep.elapsed, a.timings)});
  }
  return 0;
}

// ------------------------------------------------------------ volume

struct VolumeArgs {
  std::string form_path;
  int k = 2;
  std::vector<std::string> intervals;
  std::vector<double> interval_all;
  std::string t_list = "5,10,20";
  std::int64_t samples = 1'000'000;
  std::uint64_t seed = 0;
  std::string mode = "both";
  int threads = 0;
  bool timings = false;
  std::string out = "-";
};

int run_volume(const VolumeArgs& a) {
  auto loaded = load_form_file(a.form_path);
  auto grid = build_grid(a.k, a.intervals, a.interval_all);
  auto Ts = parse_double_list(a.t_list);
  const int n = loaded.form.n();
  bool want_cg = a.mode == "cg" || a.mode == "both";
  bool want_direct = a.mode == "direct" || a.mode == "both";
  if (!want_cg && !want_direct) throw Error("mode must be cg|direct|both");

  Estimate cg{0, 0};
  if (want_cg) {
    Rng rng(a.seed);
    cg = estimate_cg(loaded.form, a.k, std::max<std::int64_t>(a.samples, 10'000),
                     rng, a.threads);
  }
  json header = {{"cmd", "volume"}, {"form", a.form_path}, {"k", a.k},
                 {"samples", a.samples}, {"seed", a.seed},
                 {"mode", a.mode},   {"threads", a.threads}};
  CsvWriter csv(a.out, header,
                {"T", "cg", "cg_stderr", "main_term", "direct",
                 "direct_stderr", "ratio"});
  for (double T : Ts) {
    double main = want_cg ? main_term(cg.value, grid, T, n, a.k) : 0.0;
    std::string direct_cell, direct_err_cell, ratio_cell;
    if (want_direct) {
      Rng rng(a.seed + 1);
      auto rv = estimate_region_volume(loaded.form, grid, T,
                                       std::max<std::int64_t>(a.samples, 100'000),
                                       rng, a.threads);
      direct_cell = format_double(rv.volume);
      direct_err_cell = format_double(rv.stderr_);
      if (want_cg && main != 0.0) ratio_cell = format_double(rv.volume / main);
    }
    csv.row({format_double(T),
             want_cg ? format_double(cg.value) : "",
             want_cg ? format_double(cg.stderr_) : "",
             want_cg ? format_double(main) : "", direct_cell,
             direct_err_cell, ratio_cell});
  }
  return 0;
}

// ------------------------------------------------------------ rogers

struct RogersArgs {
  int k = 2;
  int r = 0;  // 0 = all ranks 1..k
  std::int64_t q_max = 8;
  std::int64_t entry_bound = 8;
  int d = 4;
  std::int64_t modulus = 0;  // 0 = skip congruence column
  std::int64_t height_bound = 2;
  std::string emit = "weights";
  std::string out = "-";
};

int run_rogers(const RogersArgs& a) {
  if (a.emit != "terms" && a.emit != "weights" && a.emit != "admissibility")
    throw Error("emit must be terms|weights|admissibility");
  json header = {{"cmd", "rogers"},   {"k", a.k},
                 {"q_max", a.q_max},  {"entry_bound", a.entry_bound},
                 {"d", a.d},          {"modulus", a.modulus},
                 {"emit", a.emit}};
  CsvWriter csv(a.out, header,
                {"r", "q", "D", "index", "cD_num", "cD_den_exponent",
                 "cong_admissible", "prim_witness"});
  int r_lo = a.r ? a.r : 1;
  int r_hi = a.r ? a.r : a.k;
  for (int r = r_lo; r <= r_hi; ++r)
    for (std::int64_t q = 1; q <= a.q_max; ++q) {
      if (r == a.k && q > 1) continue;  // only the identity at full rank
      std::int64_t bound = std::max(q, a.entry_bound);
      for (auto& term : enum_rref_terms(a.k, r, q, bound)) {
        std::string dflat;
        for (std::size_t i = 0; i < term.d.size(); ++i) {
          if (i) dflat += " ";
          dflat += std::to_string(term.d[i]);
        }
        std::string index_cell, cong_cell, prim_cell;
        if (a.emit != "terms") {
          auto w = weight_cd(term, a.d);
          index_cell = w.index.str();
        }
        if (a.emit == "admissibility") {
          if (a.modulus >= 1) {
            auto verdict = congruence_admissible(term, a.modulus);
            cong_cell = verdict.admissible ? "yes" : "no";
            if (verdict.verdicts_differ) cong_cell += "*";
          }
          auto cert = primitive_admissible_search(term, a.d, a.height_bound);
          if (cert) {
            prim_cell = "x=";
            for (std::size_t i = 0; i < cert->x.size(); ++i) {
              if (i) prim_cell += " ";
              prim_cell += std::to_string(cert->x[i]);
            }
          } else {
            prim_cell = "unknown";
          }
        }
        csv.row({std::to_string(r), std::to_string(q), dflat, index_cell,
                 index_cell.empty() ? "" : "1",
                 index_cell.empty() ? "" : std::to_string(a.d), cong_cell,
                 prim_cell});
      }
    }
  return 0;
}

// ------------------------------------------------------------ sample

struct SampleArgs {
  int dim = 2;
  std::string mode = "exact2d";
  std::int64_t trials = 1000;
  std::uint64_t seed = 0;
  std::string region;
  int k = 1;
  std::string cls = "all";
  std::string v0;
  std::int64_t modulus = 1;
  int threads = 0;
  std::string out = "-";
};

int run_sample(const SampleArgs& a) {
  SamplerSpec::Mode mode;
  if (a.mode == "exact2d")
    mode = SamplerSpec::Mode::Exact2D;
  else if (a.mode == "siegel")
    mode = SamplerSpec::Mode::SiegelApprox;
  else
    throw Error("mode must be exact2d|siegel");
  SamplerSpec spec(a.dim, mode, a.seed);
  RegionSpec region = region_from_json(load_json_arg(a.region));
  if (region.k() != a.k) throw Error("region rank != --k");
  auto cls = build_class(a.cls, a.v0, a.modulus);

  Rng rng(a.seed);
  auto moment =
      empirical_moment(spec, region, a.k, cls, a.trials, rng, a.threads);

  json header = {{"cmd", "sample"}, {"dim", a.dim},     {"mode", a.mode},
                 {"trials", a.trials}, {"seed", a.seed}, {"k", a.k},
                 {"class", a.cls}};
  CsvWriter csv(a.out, header, {"trial", "value"});
  for (std::size_t t = 0; t < moment.values.size(); ++t)
    csv.row({std::to_string(t), std::to_string(moment.values[t])});
  csv.row({"mean", format_double(moment.mean)});
  csv.row({"variance", format_double(moment.variance)});
  csv.row({"stderr", format_double(moment.stderr_)});
  return 0;
}

// ----------------------------------------------------------- density

struct DensityArgs {
  std::string form_path;
  std::string targets;
  int k = 2;
  double eps = 1e-2;
  std::int64_t budget = 1'000'000;
  std::string out = "-";
};

int run_density(const DensityArgs& a) {
  auto loaded = load_form_file(a.form_path);
  TargetMatrix targets =
      targets_from_json(load_json_arg(a.targets), a.k, a.eps);
  auto res = integer_approx_search(loaded.form, targets, a.budget);
  json out;
  out["found"] = res.found;
  out["nodes_expanded"] = res.nodes;
  out["max_residual"] = res.max_residual;
  out["residuals"] = res.residuals;
  json tuple = json::array();
  for (auto& v : res.tuple) tuple.push_back(v);
  out["tuple"] = tuple;
  if (a.out == "-")
    std::printf("%s\n", out.dump(2).c_str());
  else {
    std::ofstream f(a.out);
    if (!f) throw Error("cannot open " + a.out);
    f << out.dump(2) << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- lie

struct LieArgs {
  int n = 2;
  std::string checks = "all";
  std::uint64_t seed = 0;
  std::string out = "-";
};

int run_lie(const LieArgs& a) {
  json out;
  out["n"] = a.n;
  bool ok = true;
  auto add = [&](const std::string& name, const lie::LieReport& rep) {
    json r;
    r["ok"] = rep.ok;
    r["failures"] = rep.failures;
    for (auto& [k, v] : rep.stats) r["stats"][k] = v;
    out["checks"][name] = r;
    ok = ok && rep.ok;
  };
  bool all = a.checks.find("all") != std::string::npos;
  auto wants = [&](const char* name) {
    return all || a.checks.find(name) != std::string::npos;
  };
  if (wants("roots") || wants("weights"))
    add("decomposition", lie::verify_decomposition(a.n));
  if (wants("brackets")) add("brackets", lie::verify_bracket_table(a.n));
  if (wants("invariance") || wants("irreducible"))
    add("irreducible", lie::verify_irreducible(a.n));
  if (wants("maximality")) {
    Rng rng(a.seed);
    add("maximality", lie::verify_maximality(a.n, 10, rng));
  }
  out["ok"] = ok;
  if (a.out == "-")
    std::printf("%s\n", out.dump(2).c_str());
  else {
    std::ofstream f(a.out);
    if (!f) throw Error("cannot open " + a.out);
    f << out.dump(2) << "\n";
  }
  return ok ? 0 : 1;
}

// ------------------------------------------------------------ recipe

struct RecipeArgs {
  std::string name;
  std::string out_dir = ".";
  std::uint64_t seed = 0;
  int threads = 0;
  std::int64_t samples = 0;  // 0 = recipe default
};

int run_recipe(const RecipeArgs& a) {
  auto path = [&](const std::string& f) { return a.out_dir + "/" + f; };
  if (a.name == "thm12") {
    recipes::CountingGrowthConfig cfg;
    cfg.threads = a.threads;
    if (a.samples) cfg.cg_samples = a.samples;
    auto results = recipes::run_counting_growth(cfg);
    json header = {{"cmd", "recipe thm12"}, {"cg_samples", cfg.cg_samples}};
    CsvWriter csv(path("thm12.csv"), header,
                  {"seed", "T", "count", "main_term", "ratio", "fit"});
    for (auto& r : results) {
      for (auto& rep : r.reports)
        csv.row({std::to_string(r.seed), format_double(rep.T),
                 std::to_string(rep.count), format_double(*rep.main_term),
                 format_double(*rep.ratio),
                 format_double(r.fitted_exponent)});
      std::printf("seed %llu: fitted exponent %.4f (expect 6), "
                  "ratio %0.4f -> %0.4f\n",
                  (unsigned long long)r.seed, r.fitted_exponent,
                  *r.reports.front().ratio, *r.reports.back().ratio);
    }
    return 0;
  }
  if (a.name == "thm13") {
    recipes::VolumeConvergenceConfig cfg;
    cfg.threads = a.threads;
    if (a.samples) cfg.samples = a.samples;
    auto points = recipes::run_volume_convergence(cfg);
    json header = {{"cmd", "recipe thm13"}, {"samples", cfg.samples}};
    CsvWriter csv(path("thm13.csv"), header,
                  {"T", "direct", "direct_stderr", "main_term", "ratio"});
    for (auto& p : points) {
      csv.row({format_double(p.T), format_double(p.direct),
               format_double(p.direct_stderr), format_double(p.main),
               format_double(p.ratio)});
      std::printf("T=%g: direct/main = %.4f (+- %.4f)\n", p.T, p.ratio,
                  p.direct_stderr / p.main);
    }
    return 0;
  }
  if (a.name == "thm14" || a.name == "thm15") {
    recipes::ClassFactorConfig cfg;
    cfg.threads = a.threads;
    cfg.seed = a.seed ? a.seed : cfg.seed;
    auto r = a.name == "thm14" ? recipes::run_primitive_factor(cfg)
                               : recipes::run_congruence_factor(cfg);
    json header = {{"cmd", "recipe " + a.name}, {"T", cfg.T}};
    CsvWriter csv(path(a.name + ".csv"), header,
                  {"count_class", "count_all", "ratio", "reference"});
    csv.row({std::to_string(r.count_class), std::to_string(r.count_all),
             format_double(r.ratio), format_double(r.reference)});
    std::printf("%s: ratio %.5f vs reference %.5f (%+.2f%%)\n",
                a.name.c_str(), r.ratio, r.reference,
                100.0 * (r.ratio / r.reference - 1.0));
    return 0;
  }
  if (a.name == "rogers") {
    RogersArgs ra;
    ra.k = 2;
    ra.q_max = 4;
    ra.entry_bound = 4;
    ra.modulus = 2;
    ra.emit = "admissibility";
    ra.out = path("rogers.csv");
    run_rogers(ra);
    std::printf("rogers: terms with weights and admissibility in %s\n",
                ra.out.c_str());
    return 0;
  }
  if (a.name == "siegel2d") {
    recipes::Siegel2dConfig cfg;
    cfg.threads = a.threads;
    if (a.samples) cfg.trials = a.samples;
    auto results = recipes::run_siegel2d(cfg);
    json header = {{"cmd", "recipe siegel2d"}, {"trials", cfg.trials}};
    CsvWriter csv(path("siegel2d.csv"), header,
                  {"area", "mean", "stderr", "mean_primitive",
                   "stderr_primitive"});
    for (auto& r : results) {
      csv.row({format_double(r.area), format_double(r.mean_all),
               format_double(r.stderr_all), format_double(r.mean_primitive),
               format_double(r.stderr_primitive)});
      std::printf("area %g: mean %.4f (expect %.4f), primitive %.4f "
                  "(expect %.4f)\n",
                  r.area, r.mean_all, r.area, r.mean_primitive,
                  r.area * 6.0 / (std::numbers::pi * std::numbers::pi));
    }
    return 0;
  }
  if (a.name == "lie") {
    for (int n : {2, 3, 4}) {
      LieArgs la;
      la.n = n;
      la.checks = "all";
      la.out = path("lie_n" + std::to_string(n) + ".json");
      int rc = run_lie(la);
      std::printf("lie n=%d: %s\n", n, rc == 0 ? "ok" : "FAILED");
      if (rc != 0) return rc;
    }
    return 0;
  }
  if (a.name == "density") {
    const double av = std::pow(2.0, 0.25);
    MatrixXd g = MatrixXd::Identity(4, 4);
    g(0, 0) = av;
    g(3, 3) = 1.0 / av;
    auto form = SymplecticForm::from_g(g, 2);
    Rng rng(a.seed ? a.seed : 41);
    json header = {{"cmd", "recipe density"}};
    CsvWriter csv(path("density.csv"), header,
                  {"target", "found", "max_residual", "nodes"});
    int found = 0;
    for (int trial = 0; trial < 20; ++trial) {
      double target = 0.1 + 2.9 * rng.uniform();
      auto res = integer_approx_search(
          form, TargetMatrix::uniform(2, target, 1e-2), 1'000'000);
      found += res.found;
      csv.row({format_double(target), res.found ? "1" : "0",
               format_double(res.max_residual), std::to_string(res.nodes)});
    }
    std::printf("density: %d/20 targets hit at eps 1e-2\n", found);
    return 0;
  }
  throw Error("unknown recipe '" + a.name + "'");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"desk-scale experiments with values of symplectic forms at "
               "integer vectors"};
  app.require_subcommand(1);

  CountArgs ca;
  auto* count = app.add_subcommand("count", "count k-tuples in a ball");
  count->add_option("--form", ca.form_path, "form JSON file")->required();
  count->add_option("--k", ca.k);
  count->add_option("--interval", ca.intervals, "i,j,a,b (repeatable)");
  count->add_option("--interval-all", ca.interval_all,
                    "a b for every pair")->expected(2);
  count->add_option("--T-list", ca.t_list);
  count->add_option("--class", ca.cls, "all|primitive|congruence");
  count->add_option("--v0", ca.v0, "congruence residue, comma separated");
  count->add_option("--modulus", ca.modulus);
  count->add_option("--threads", ca.threads);
  count->add_option("--seed", ca.seed);
  count->add_option("--cg", ca.cg)->each([&](const std::string&) {
    ca.cg_given = true;
  });
  count->add_option("--cg-samples", ca.cg_samples);
  count->add_flag("--include-zero", ca.include_zero);
  count->add_option("--max-points", ca.max_points);
  count->add_flag("--timings", ca.timings);
  count->add_option("--out", ca.out);

  VolumeArgs va;
  auto* volume = app.add_subcommand("volume", "main-term coefficient and "
                                              "direct volume Monte Carlo");
  volume->add_option("--form", va.form_path)->required();
  volume->add_option("--k", va.k);
  volume->add_option("--interval", va.intervals);
  volume->add_option("--interval-all", va.interval_all)->expected(2);
  volume->add_option("--T-list", va.t_list);
  volume->add_option("--samples", va.samples);
  volume->add_option("--seed", va.seed);
  volume->add_option("--mode", va.mode, "cg|direct|both");
  volume->add_option("--threads", va.threads);
  volume->add_flag("--timings", va.timings);
  volume->add_option("--out", va.out);

  RogersArgs ra;
  auto* rogers = app.add_subcommand("rogers", "canonical matrix families "
                                              "and exact weights");
  rogers->add_option("--k", ra.k);
  rogers->add_option("--r", ra.r, "single rank (default all)");
  rogers->add_option("--q-max", ra.q_max);
  rogers->add_option("--entry-bound", ra.entry_bound);
  rogers->add_option("--d", ra.d, "ambient dimension");
  rogers->add_option("--modulus", ra.modulus);
  rogers->add_option("--height-bound", ra.height_bound);
  rogers->add_option("--emit", ra.emit, "terms|weights|admissibility");
  rogers->add_option("--out", ra.out);

  SampleArgs sa;
  auto* sample = app.add_subcommand("sample", "random lattices and Siegel "
                                              "transforms");
  sample->add_option("--dim", sa.dim);
  sample->add_option("--mode", sa.mode, "exact2d|siegel");
  sample->add_option("--trials", sa.trials);
  sample->add_option("--seed", sa.seed);
  sample->add_option("--region-json", sa.region, "file or inline JSON")
      ->required();
  sample->add_option("--k", sa.k);
  sample->add_option("--class", sa.cls);
  sample->add_option("--v0", sa.v0);
  sample->add_option("--modulus", sa.modulus);
  sample->add_option("--threads", sa.threads);
  sample->add_option("--out", sa.out);

  DensityArgs da;
  auto* density = app.add_subcommand("density", "integer tuples "
                                                "approximating targets");
  density->add_option("--form", da.form_path)->required();
  density->add_option("--targets", da.targets, "file or inline JSON")
      ->required();
  density->add_option("--k", da.k);
  density->add_option("--eps", da.eps);
  density->add_option("--budget", da.budget);
  density->add_option("--out", da.out);

  LieArgs la;
  auto* lie_cmd = app.add_subcommand("lie", "exact Lie-algebra checks");
  lie_cmd->add_option("--n", la.n);
  lie_cmd->add_option("--checks", la.checks,
                      "roots,weights,brackets,invariance,irreducible,"
                      "maximality,all");
  lie_cmd->add_option("--seed", la.seed);
  lie_cmd->add_option("--out", la.out);

  RecipeArgs rca;
  auto* recipe = app.add_subcommand("recipe", "canned experiments");
  recipe->add_option("name", rca.name,
                     "thm12|thm13|thm14|thm15|rogers|siegel2d|lie|density")
      ->required();
  recipe->add_option("--out-dir", rca.out_dir);
  recipe->add_option("--seed", rca.seed);
  recipe->add_option("--threads", rca.threads);
  recipe->add_option("--samples", rca.samples, "override the default scale");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 2;
  }

  try {
    if (*count) return run_count(ca);
    if (*volume) return run_volume(va);
    if (*rogers) return run_rogers(ra);
    if (*sample) return run_sample(sa);
    if (*density) return run_density(da);
    if (*lie_cmd) return run_lie(la);
    if (*recipe) return run_recipe(rca);
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "capacity: %s\n", e.what());
    return 3;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  return 2;
}
