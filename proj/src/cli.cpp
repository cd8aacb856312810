#include "semiframe/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "semiframe/io.hpp"
#include "semiframe/random.hpp"

namespace semiframe::cli {

namespace {

using io::Json;

struct Options {
  std::string command;
  std::vector<std::string> inputs;
  std::vector<std::string> families;
  std::string output;
  std::vector<Index> sizes;
  Index n_max = 4;
  std::optional<double> tol;
  std::uint64_t seed = 7;
  std::string format = "json";
  std::string coeff_rule;
  std::string partition;
  Index nodes = 0;
  std::vector<int> m_list{0, 1, 2};
  int refinements = 3;
  bool regularity = false;
};

[[noreturn]] void usage_error(const std::string& what) { throw Error(ErrorKind::ParseError, what); }

const std::string& single_input(const Options& o, const char* what) {
  if (o.inputs.size() != 1) usage_error(std::string(o.command) + ": exactly one --input " + what + " required");
  return o.inputs.front();
}

TruncationFamily load_family(const std::string& path, const Options& o) {
  TruncationFamily fam = io::family_from(io::load(path));
  if (!o.sizes.empty()) fam = fam.with_sizes(o.sizes);
  return fam;
}

CVector probe_vector(Index dim, std::uint64_t seed) {
  Rng rng(seed);
  return rng.unit_vector(dim);
}

// "0,1;2,3" -> {{0,1},{2,3}}
std::vector<std::vector<Index>> parse_partition(const std::string& text) {
  std::vector<std::vector<Index>> blocks;
  std::stringstream all(text);
  std::string block;
  while (std::getline(all, block, ';')) {
    std::vector<Index> ids;
    std::stringstream ss(block);
    std::string item;
    while (std::getline(ss, item, ',')) {
      try {
        std::size_t used = 0;
        ids.push_back(std::stoll(item, &used));
        if (used != item.size()) throw std::invalid_argument(item);
      } catch (const std::exception&) {
        usage_error("--partition: bad index '" + item + "'");
      }
    }
    blocks.push_back(std::move(ids));
  }
  return blocks;
}

Json cmd_analyze(const Options& o, Json& tol) {
  const VectorSystem sys = io::system_from(io::load(single_input(o, "system")));
  tol["rank_cutoff"] = SpectralFrameData::kRelativeRankCutoff;
  Json report = io::to_json(optimal_bounds(sys));
  report["dim"] = sys.dim();
  report["size"] = sys.size();
  return report;
}

Json cmd_classify(const Options& o, Json& tol) {
  std::vector<std::string> paths = o.families;
  paths.insert(paths.end(), o.inputs.begin(), o.inputs.end());
  if (paths.size() != 1) usage_error("classify: exactly one --family required");
  const TruncationFamily fam = load_family(paths.front(), o);
  ClassifyThresholds th;
  if (o.tol) th.tau = *o.tol;
  tol["tau"] = th.tau;
  tol["flat_slope"] = th.flat_slope;
  tol["decay_slope"] = th.decay_slope;
  tol["max_fit_residual"] = th.max_fit_residual;
  Json report = io::to_json(classify_asymptotic(fam, th));
  if (o.regularity) {
    RegularityOptions ro;
    ro.n_max = o.n_max;
    tol["divergence_factor"] = ro.divergence_factor;
    tol["growth_slope"] = ro.growth_slope;
    report["regularity"] = io::to_json(regularity_order(fam, ro));
  }
  return report;
}

Json cmd_scale(const Options& o, Json& tol) {
  Json report;
  if (!o.families.empty()) {
    if (o.families.size() != 1) usage_error("scale: one --family expected");
    if (o.coeff_rule.empty()) usage_error("scale: --coeff-rule required with --family");
    const TruncationFamily fam = load_family(o.families.front(), o);
    EndSpaceOptions eo;
    if (o.tol) eo.cauchy_gap = *o.tol;
    tol["cauchy_gap"] = eo.cauchy_gap;
    tol["geometric_ratio"] = eo.geometric_ratio;
    report["probe"] = io::to_json(end_space_probe(fam, CoeffRule::parse(o.coeff_rule), o.n_max, eo));
    return report;
  }
  const VectorSystem sys = io::system_from(io::load(single_input(o, "system")));
  const CVector f = probe_vector(sys.dim(), o.seed);
  const CVector c = analysis(sys, f);
  Json ns = Json::array(), h = Json::array(), fh = Json::array(), defects = Json::array();
  for (Index n = -o.n_max; n <= o.n_max; ++n) {
    ns.push_back(n);
    h.push_back(scale_norm(sys, f, n).value);
    fh.push_back(seq_scale_norm(sys, c, n + 1).value);
    defects.push_back(isometry_defect(sys, n, 8, o.seed));
  }
  tol["rank_cutoff"] = SpectralFrameData::kRelativeRankCutoff;
  tol["overflow_guard"] = SpectralFrameData::kOverflowGuard;
  report["n"] = ns;
  report["H_norms"] = h;
  report["frakH_norms"] = fh;
  report["frakH_index_shift"] = 1;
  report["isometry_defects"] = defects;
  return report;
}

Json cmd_dual(const Options& o, Json& tol) {
  const double t = o.tol.value_or(kDualTolerance);
  tol["dual"] = t;
  if (o.families.size() == 2) {
    ClassifyThresholds th;
    tol["flat_slope"] = th.flat_slope;
    tol["decay_slope"] = th.decay_slope;
    return io::to_json(bessel_pair_check(load_family(o.families[0], o), load_family(o.families[1], o), th));
  }
  if (o.inputs.empty() || o.inputs.size() > 2) usage_error("dual: one or two --input systems required");
  const VectorSystem psi = io::system_from(io::load(o.inputs[0]));
  Json report;
  VectorSystem phi = o.inputs.size() == 2 ? io::system_from(io::load(o.inputs[1])) : canonical_dual(psi);
  if (o.inputs.size() == 1) report["dual"] = io::to_json(phi);
  DualPairReport r = is_dual_pair(psi, phi, 16, o.seed);
  r.is_dual = r.matrix_residual <= t;
  report["report"] = io::to_json(r);
  return report;
}

Json cmd_fusion(const Options& o, Json& tol) {
  const Json j = io::load(single_input(o, "system or fusion system"));
  tol["slack"] = kFusionSlack;
  if (j.contains("blocks")) {
    const FusionSystem fs = io::fusion_from(j);
    return Json{{"fusion_bounds", io::to_json(fusion_operator_bounds(fs))}};
  }
  if (o.partition.empty()) usage_error("fusion: --partition required for a vector system");
  const VectorSystem sys = io::system_from(j);
  return io::to_json(fusion_from_frame(sys, parse_partition(o.partition), 200, o.seed));
}

Json cmd_continuum(const Options& o, Json& tol) {
  const io::ContinuumInput in = io::continuum_from(io::load(single_input(o, "grid")));
  const Index nodes = o.nodes > 0 ? o.nodes : in.grid.size();
  const SampledContinuousFrame scf = io::build_frame(in, nodes);
  tol["rank_cutoff"] = SpectralFrameData::kRelativeRankCutoff;
  tol["divergence_factor"] = kDivergenceFactor;
  Json report;
  report["points"] = scf.points();
  report["nodes"] = scf.nodes();
  report["bounds"] = io::to_json(optimal_bounds(scf.orthonormal_system()))["bounds"];
  report["adjointness_defect"] = adjointness_defect(scf, 8, o.seed);
  if (scf.profile) {
    report["multiplication_defect"] = multiplication_defect(scf);
    Json rows = Json::array();
    for (const ScanRow& row : nonregularity_scan(scf, o.m_list, o.refinements)) rows.push_back(io::to_json(row));
    report["nonregularity"] = rows;
  }
  return report;
}

std::vector<CMatrix> matrices(const Json& j, const char* key, Index rows) {
  std::vector<CMatrix> out;
  const Json& list = j.at(key);
  for (std::size_t i = 0; i < list.size(); ++i)
    out.push_back(io::matrix_from(list[i], std::string(key) + "[" + std::to_string(i) + "]", rows));
  return out;
}

Json cmd_equivalence(const Options& o, Json& tol) {
  const Json j = io::load(single_input(o, "equivalence problem"));
  for (const char* key : {"relation", "a", "b"})
    if (!j.contains(key)) usage_error(std::string("equivalence: missing field '") + key + "'");
  const std::string relation = j["relation"].get<std::string>();
  const RankNSystem a = io::rank_n_from(j["a"]);
  const RankNSystem b = io::rank_n_from(j["b"]);
  const auto t = [&] {
    return j.contains("T") ? io::matrix_from(j["T"], "T", a.dim()) : CMatrix(CMatrix::Identity(a.dim(), a.dim()));
  };
  const auto u = [&] {
    return j.contains("U") ? matrices(j, "U", a.rank())
                           : std::vector<CMatrix>(a.points(), CMatrix::Identity(a.rank(), a.rank()));
  };
  EquivalenceReport r;
  if (relation == "similar") r = check_similar(a, b, t());
  else if (relation == "gauge") r = check_gauge(a, b, u());
  else if (relation == "kernel") r = check_kernel_equivalent(a, b, t(), u());
  else if (relation == "bundle") {
    if (!j.contains("T_family")) usage_error("equivalence: bundle needs 'T_family'");
    r = check_bundle(a, b, matrices(j, "T_family", a.dim()));
  } else {
    usage_error("equivalence: unknown relation '" + relation + "'");
  }
  const double t_ok = o.tol.value_or(kEquivalenceTolerance);
  r.pass = r.max_defect <= t_ok;
  if (!r.pass) r.downgrade.reset();
  tol["defect"] = t_ok;
  tol["unitary"] = kUnitaryTolerance;
  tol["constancy"] = kConstancyThreshold;
  return io::to_json(r);
}

void print_text(const Json& j, const std::string& prefix, std::ostream& out) {
  if (j.is_object()) {
    for (auto it = j.begin(); it != j.end(); ++it)
      print_text(it.value(), prefix.empty() ? it.key() : prefix + "." + it.key(), out);
    return;
  }
  if (j.is_array()) {
    const bool flat = std::all_of(j.begin(), j.end(), [](const Json& e) { return e.is_primitive(); });
    if (flat && j.size() <= 8) {
      out << prefix << ": " << j.dump() << '\n';
    } else {
      out << prefix << ": [" << j.size() << " entries]\n";
    }
    return;
  }
  out << prefix << ": " << j.dump() << '\n';
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frame and semi-frame analysis of finite vector systems"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  const auto common = [&](CLI::App* sub) {
    sub->add_option("--input", o.inputs, "input JSON file (repeatable)");
    sub->add_option("--output", o.output, "write the report here instead of stdout");
    sub->add_option("--sizes", o.sizes, "truncation sizes, comma separated")->delimiter(',');
    sub->add_option("--n-max", o.n_max, "largest scale index")->check(CLI::NonNegativeNumber);
    sub->add_option("--tol", o.tol, "tolerance override");
    sub->add_option("--seed", o.seed, "seed for random probes");
    sub->add_option("--format", o.format, "json or text")->check(CLI::IsMember({"json", "text"}));
  };

  CLI::App* analyze = app.add_subcommand("analyze", "optimal bounds of a system");
  CLI::App* classify = app.add_subcommand("classify", "asymptotic verdict of a truncation family");
  CLI::App* scale = app.add_subcommand("scale", "Hilbert scale ladder or end-space probe");
  CLI::App* dual = app.add_subcommand("dual", "dual pair checks");
  CLI::App* fusion = app.add_subcommand("fusion", "fusion bounds and the fusion sandwich");
  CLI::App* continuum = app.add_subcommand("continuum", "quadrature model of a continuous frame");
  CLI::App* equivalence = app.add_subcommand("equivalence", "rank-n equivalence checks");
  for (CLI::App* sub : {analyze, classify, scale, dual, fusion, continuum, equivalence}) common(sub);
  for (CLI::App* sub : {classify, scale, dual}) sub->add_option("--family", o.families, "family JSON file");
  classify->add_flag("--regularity", o.regularity, "also report the regularity order");
  scale->add_option("--coeff-rule", o.coeff_rule, "coefficient rule, e.g. 1/k^4, exp(-k), finite:8");
  fusion->add_option("--partition", o.partition, "0-based blocks, e.g. 0,1;2,3");
  continuum->add_option("--nodes", o.nodes, "x-node count (default P)");
  continuum->add_option("--m", o.m_list, "scale indices to scan")->delimiter(',');
  continuum->add_option("--refinements", o.refinements, "number of cutoffs in the scan");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kValidationError;
  }
  o.command = app.get_subcommands().front()->get_name();

  Json tolerances = Json::object();
  Json result;
  try {
    if (o.command == "analyze") result = cmd_analyze(o, tolerances);
    else if (o.command == "classify") result = cmd_classify(o, tolerances);
    else if (o.command == "scale") result = cmd_scale(o, tolerances);
    else if (o.command == "dual") result = cmd_dual(o, tolerances);
    else if (o.command == "fusion") result = cmd_fusion(o, tolerances);
    else if (o.command == "continuum") result = cmd_continuum(o, tolerances);
    else result = cmd_equivalence(o, tolerances);
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return is_numerical(e.kind()) ? kNumericalError : kValidationError;
  } catch (const nlohmann::json::exception& e) {
    err << "error [ParseError]: " << e.what() << '\n';
    return kValidationError;
  }

  Json config{{"command", o.command},
              {"inputs", o.inputs},
              {"families", o.families},
              {"sizes", o.sizes},
              {"n_max", o.n_max},
              {"seed", o.seed},
              {"format", o.format}};
  if (o.tol) config["tol"] = *o.tol;
  if (!o.coeff_rule.empty()) config["coeff_rule"] = o.coeff_rule;
  if (!o.partition.empty()) config["partition"] = o.partition;
  Json report{{"tool", "semiframe"}, {"version", kVersion}, {"config", config}, {"tolerances", tolerances},
              {"result", result}};

  std::ostringstream text;
  if (o.format == "json") {
    text << report.dump(2) << '\n';
  } else {
    print_text(report, "", text);
  }
  if (o.output.empty()) {
    out << text.str();
  } else {
    std::ofstream file(o.output);
    if (!file) {
      err << "error: cannot write " << o.output << '\n';
      return kValidationError;
    }
    file << text.str();
  }
  return kOk;
}

}  // namespace semiframe::cli
