#include "semiframe/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "semiframe/random.hpp"

namespace semiframe::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::ParseError, where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing field '") + key + "'");
  return *it;
}

std::string sub(const std::string& where, const char* key) { return where + "." + key; }
std::string sub(const std::string& where, std::size_t i) { return where + "[" + std::to_string(i) + "]"; }

double number_from(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

Index integer_from(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<Index>();
}

RVector real_vector_from(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of numbers");
  RVector v(static_cast<Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Index>(i)) = number_from(j[i], sub(where, i));
  return v;
}

std::vector<Index> index_list_from(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array of integers");
  std::vector<Index> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(integer_from(j[i], sub(where, i)));
  return out;
}

std::string string_from(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Json trend_json(const std::vector<std::pair<Index, double>>& t) {
  Json out = Json::array();
  for (const auto& [n, v] : t) out.push_back(Json::array({n, v}));
  return out;
}

Json fit_json(const LogLogFit& f) {
  return Json{{"slope", f.slope}, {"intercept", f.intercept}, {"residual", f.residual}};
}

}  // namespace

Json parse(std::string_view text, std::string_view source) {
  try {
    return Json::parse(text.begin(), text.end());
  } catch (const nlohmann::json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw Error(ErrorKind::ParseError, std::string(source) + ":" + std::to_string(line) + ":" +
                                           std::to_string(column) + ": malformed JSON");
  }
}

Json load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, path.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str(), path.string());
}

Complex complex_from(const Json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  fail(where, "expected a number or [re, im]");
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

CMatrix matrix_from(const Json& j, const std::string& where, Index rows) {
  if (!j.is_array()) fail(where, "expected a list of columns");
  const Index cols = static_cast<Index>(j.size());
  if (cols > 0 && rows < 0) {
    if (!j[0].is_array()) fail(sub(where, std::size_t{0}), "expected a column");
    rows = static_cast<Index>(j[0].size());
  }
  CMatrix m(std::max<Index>(rows, 0), cols);
  for (std::size_t c = 0; c < j.size(); ++c) {
    const Json& col = j[c];
    if (!col.is_array()) fail(sub(where, c), "expected a column");
    if (static_cast<Index>(col.size()) != rows)
      fail(sub(where, c), "column has length " + std::to_string(col.size()) + ", expected " + std::to_string(rows));
    for (std::size_t r = 0; r < col.size(); ++r)
      m(static_cast<Index>(r), static_cast<Index>(c)) = complex_from(col[r], sub(sub(where, c), r));
  }
  return m;
}

Json to_json(const CMatrix& m) {
  Json out = Json::array();
  for (Index c = 0; c < m.cols(); ++c) {
    Json col = Json::array();
    for (Index r = 0; r < m.rows(); ++r) col.push_back(to_json(m(r, c)));
    out.push_back(std::move(col));
  }
  return out;
}

Json to_json(const RVector& v) {
  Json out = Json::array();
  for (Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

VectorSystem system_from(const Json& j) {
  const std::string where = "system";
  const Index dim = integer_from(field(j, "dim", where), sub(where, "dim"));
  if (dim < 1) throw Error(ErrorKind::DimensionMismatch, "d ≥ 1 required");
  const Json& atoms = field(j, "atoms", where);
  if (atoms.is_array() && atoms.empty()) throw Error(ErrorKind::DimensionMismatch, "N ≥ 1 required");
  CMatrix m = matrix_from(atoms, sub(where, "atoms"), dim);
  RVector weights;
  if (j.contains("weights") && !j["weights"].is_null()) weights = real_vector_from(j["weights"], sub(where, "weights"));
  std::string label;
  if (j.contains("label")) label = string_from(j["label"], sub(where, "label"));
  return VectorSystem(std::move(m), std::move(weights), std::move(label));
}

Json to_json(const VectorSystem& sys) {
  return Json{{"dim", sys.dim()}, {"atoms", to_json(sys.atoms())}, {"weights", to_json(sys.weights())},
              {"label", sys.label()}};
}

TruncationFamily family_from(const Json& j) {
  const std::string where = "family";
  const Generator gen = [&] {
    const std::string name = string_from(field(j, "generator", where), sub(where, "generator"));
    try {
      return parse_generator(name);
    } catch (const Error& e) {
      fail(sub(where, "generator"), e.what());
    }
  }();
  const Json empty = Json::object();
  const Json& params = j.contains("params") ? j["params"] : empty;
  const std::string pw = sub(where, "params");
  if (!params.is_object()) fail(pw, "expected an object");
  std::vector<Index> sizes = index_list_from(field(j, "sizes", where), sub(where, "sizes"));

  switch (gen) {
    case Generator::WeightedDiag: {
      const std::string tag = string_from(field(params, "rule", pw), sub(pw, "rule"));
      return TruncationFamily(DiagParams{WeightRule::parse(tag)}, std::move(sizes));
    }
    case Generator::OperatorImage: {
      OperatorImageParams p;
      if (params.contains("base")) {
        p.base = matrix_from(params["base"], sub(pw, "base"));
      } else {
        const auto seed = static_cast<std::uint64_t>(integer_from(field(params, "seed", pw), sub(pw, "seed")));
        const Index dim = integer_from(field(params, "dim", pw), sub(pw, "dim"));
        if (dim < 1) fail(sub(pw, "dim"), "must be positive");
        Rng rng(seed);
        p.base = rng.conditioned(dim, 0.5, 2.0);
        p.seed = seed;
      }
      return TruncationFamily(std::move(p), std::move(sizes));
    }
    case Generator::Gabor: {
      GaborParams p;
      const std::string window = params.contains("window") ? string_from(params["window"], sub(pw, "window")) : "gaussian";
      if (window == "gaussian") p.window = GaborParams::Window::Gaussian;
      else if (window == "delta") p.window = GaborParams::Window::Delta;
      else if (window == "constant") p.window = GaborParams::Window::Constant;
      else fail(sub(pw, "window"), "unknown window '" + window + "'");
      p.critical = !(params.contains("a") || params.contains("b"));
      if (params.contains("critical")) p.critical = params["critical"].get<bool>();
      if (!p.critical) {
        p.a = integer_from(field(params, "a", pw), sub(pw, "a"));
        p.b = integer_from(field(params, "b", pw), sub(pw, "b"));
      }
      return TruncationFamily(p, std::move(sizes));
    }
    case Generator::Custom: {
      IndexedParams p;
      p.index = index_list_from(field(params, "index", pw), sub(pw, "index"));
      const RVector w = real_vector_from(field(params, "weights", pw), sub(pw, "weights"));
      p.weights.assign(w.data(), w.data() + w.size());
      return TruncationFamily(std::move(p), std::move(sizes));
    }
  }
  fail(where, "unsupported generator");
}

Json to_json(const TruncationFamily& family) {
  Json params = Json::object();
  std::visit(
      [&](const auto& p) {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DiagParams>) {
          params["rule"] = p.rule.tag();
        } else if constexpr (std::is_same_v<P, OperatorImageParams>) {
          if (p.seed) {
            params["seed"] = *p.seed;
            params["dim"] = p.base.rows();
          } else {
            params["base"] = to_json(p.base);
          }
        } else if constexpr (std::is_same_v<P, GaborParams>) {
          params["window"] = p.window == GaborParams::Window::Gaussian ? "gaussian"
                             : p.window == GaborParams::Window::Delta ? "delta"
                                                                       : "constant";
          params["critical"] = p.critical;
          if (!p.critical) {
            params["a"] = p.a;
            params["b"] = p.b;
          }
        } else if constexpr (std::is_same_v<P, IndexedParams>) {
          params["index"] = p.index;
          params["weights"] = p.weights;
        } else {
          params["name"] = p.name;
        }
      },
      family.params());
  return Json{{"generator", to_string(family.generator())}, {"params", params}, {"sizes", family.sizes()}};
}

FusionSystem fusion_from(const Json& j) {
  const std::string where = "fusion";
  const Index dim = integer_from(field(j, "dim", where), sub(where, "dim"));
  const Json& blocks = field(j, "blocks", where);
  if (!blocks.is_array()) fail(sub(where, "blocks"), "expected an array");
  std::vector<CMatrix> bases;
  std::vector<double> weights;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const std::string bw = sub(sub(where, "blocks"), b);
    bases.push_back(matrix_from(field(blocks[b], "basis", bw), sub(bw, "basis"), dim));
    weights.push_back(blocks[b].contains("weight") ? number_from(blocks[b]["weight"], sub(bw, "weight")) : 1.0);
  }
  return FusionSystem(dim, std::move(bases), std::move(weights));
}

Json to_json(const FusionSystem& fs) {
  Json blocks = Json::array();
  for (Index j = 0; j < fs.count(); ++j) blocks.push_back(Json{{"basis", to_json(fs.blocks()[j])}, {"weight", fs.weights()[j]}});
  return Json{{"dim", fs.dim()}, {"blocks", blocks}};
}

ContinuumInput continuum_from(const Json& j) {
  const std::string where = "grid";
  ContinuumInput in;
  in.grid.n = static_cast<int>(integer_from(field(j, "n", where), sub(where, "n")));
  in.grid.r = real_vector_from(field(j, "r", where), sub(where, "r"));
  if (j.contains("u")) {
    in.grid.u = real_vector_from(j["u"], sub(where, "u"));
  }
  if (in.grid.r.size() < 1) fail(sub(where, "r"), "at least one grid point required");
  // Uniform midpoint grids are recognised so the Fourier node rule applies.
  const double dr = 2.0 * in.grid.r(0);
  bool uniform = dr > 0.0;
  for (Index i = 1; i < in.grid.r.size() && uniform; ++i)
    uniform = std::abs(in.grid.r(i) - in.grid.r(i - 1) - dr) <= 1e-9 * dr;
  in.grid.dr = uniform ? dr : 0.0;
  if (!j.contains("u")) {
    if (!uniform) fail(sub(where, "u"), "required for a non-uniform grid");
    in.grid.u = (in.grid.r.array().pow(in.grid.n - 1) * dr).matrix();
  }
  if (j.contains("x")) in.x = real_vector_from(j["x"], sub(where, "x"));
  if (j.contains("w")) in.w = real_vector_from(j["w"], sub(where, "w"));
  if (in.x.has_value() != in.w.has_value()) fail(where, "x and w must be given together");
  if (j.contains("atoms")) in.atoms = matrix_from(j["atoms"], sub(where, "atoms"), in.grid.r.size());
  if (j.contains("s")) in.s = real_vector_from(j["s"], sub(where, "s"));
  return in;
}

SampledContinuousFrame build_frame(const ContinuumInput& in, Index nodes) {
  if (in.atoms) {
    if (!in.x) throw Error(ErrorKind::InvalidGrid, "explicit atoms need nodes x and weights w");
    return SampledContinuousFrame(in.grid, *in.x, *in.w, *in.atoms, in.s);
  }
  if (!in.s) throw Error(ErrorKind::MissingProfile, "grid without atoms needs a profile s");
  if (in.x) {
    check_admissible(*in.s);
    return SampledContinuousFrame(in.grid, *in.x, *in.w, affine_atoms(in.grid, *in.s, *in.x), in.s);
  }
  return affine_system(in.grid, *in.s, nodes);
}

RankNSystem rank_n_from(const Json& j) {
  const std::string where = "rank_n";
  const Index dim = integer_from(field(j, "dim", where), sub(where, "dim"));
  const Json& blocks = field(j, "blocks", where);
  if (!blocks.is_array()) fail(sub(where, "blocks"), "expected an array");
  std::vector<CMatrix> mats;
  for (std::size_t b = 0; b < blocks.size(); ++b) mats.push_back(matrix_from(blocks[b], sub(sub(where, "blocks"), b), dim));
  std::vector<double> measure;
  if (j.contains("measure")) {
    const RVector m = real_vector_from(j["measure"], sub(where, "measure"));
    measure.assign(m.data(), m.data() + m.size());
  } else {
    measure.assign(mats.size(), 1.0);
  }
  return RankNSystem(dim, std::move(mats), std::move(measure));
}

Json to_json(const RankNSystem& rs) {
  Json blocks = Json::array();
  for (const CMatrix& b : rs.blocks()) blocks.push_back(to_json(b));
  return Json{{"dim", rs.dim()}, {"blocks", blocks}, {"measure", rs.measure()}};
}

Json to_json(const BoundsReport& r) {
  return Json{{"bounds", {{"lower", r.lower}, {"upper", r.upper}}},
              {"total", r.total},
              {"class", to_string(r.snapshot_class)},
              {"rank", r.rank},
              {"eigenvalues", to_json(r.eigenvalues)}};
}

Json to_json(const SemiFrameVerdict& v) {
  return Json{{"verdict", to_string(v.verdict)},
              {"trends", {{"lower", trend_json(v.lower_trend)}, {"upper", trend_json(v.upper_trend)}}},
              {"slopes", {{"lower", v.slope_lower}, {"upper", v.slope_upper}}},
              {"confidence", v.confidence}};
}

Json to_json(const BoundTrends& t) {
  return Json{{"lower", trend_json(t.lower)},
              {"upper", trend_json(t.upper)},
              {"all_total", t.all_total},
              {"lower_fit", fit_json(t.lower_fit)},
              {"upper_fit", fit_json(t.upper_fit)}};
}

Json to_json(const RegularityReport& r) {
  Json norms = Json::array();
  for (const auto& per_atom : r.norms) {
    Json a = Json::array();
    for (const auto& per_n : per_atom) {
      Json row = Json::array();
      for (double v : per_n) row.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
      a.push_back(std::move(row));
    }
    norms.push_back(std::move(a));
  }
  return Json{{"n_max", r.n_max},
              {"atom_orders", r.atom_orders},
              {"family_order", r.family_order},
              {"totally_regular", r.totally_regular},
              {"norms", norms}};
}

Json to_json(const EndSpaceProbe& p) {
  Json ladder = Json::array();
  for (const auto& [n, v] : p.ladder) ladder.push_back(Json::array({n, std::isfinite(v) ? Json(v) : Json(nullptr)}));
  Json conv = Json::array();
  for (bool c : p.converged) conv.push_back(c);
  return Json{{"tag", to_string(p.tag)},
              {"order", p.tag == GrowthTag::PolynomialOrder ? Json(p.order) : Json(nullptr)},
              {"ladder", ladder},
              {"converged", conv}};
}

Json to_json(const DualPairReport& r) {
  return Json{{"max_residual", r.max_residual},
              {"symmetric_residual", r.symmetric_residual},
              {"matrix_residual", r.matrix_residual},
              {"is_dual", r.is_dual}};
}

Json to_json(const BesselPairReport& r) {
  return Json{{"verdict", to_string(r.verdict)},
              {"psi", to_json(r.psi)},
              {"phi", to_json(r.phi)},
              {"worst_dual_residual", r.worst_dual_residual}};
}

Json to_json(const FusionFromFrame& f) {
  Json local = Json::array();
  for (const auto& l : f.local) local.push_back(Json{{"lower", l.lower}, {"upper", l.upper}, {"rank", l.rank}});
  const BoundsReport fb = fusion_operator_bounds(f.fusion);
  return Json{{"frame_bounds", {{"lower", f.lower}, {"upper", f.upper}}},
              {"local_bounds", local},
              {"m_inf", f.m_inf},
              {"M_sup", f.M_sup},
              {"fusion", to_json(f.fusion)},
              {"fusion_bounds", {{"lower", fb.lower}, {"upper", fb.upper}}},
              {"sandwich",
               {{"lower", f.sandwich.lower_constant},
                {"upper", f.sandwich.upper_constant},
                {"probes", f.sandwich.probes},
                {"max_violation", f.sandwich.max_violation},
                {"holds", f.sandwich.holds}}},
              {"upper_semi_frame", to_json(f.upper_semi_frame)},
              {"upper_semi_frame_max_ratio", f.semi_frame_max_ratio}};
}

Json to_json(const FrameFromFusion& f) {
  return Json{{"local_upper", f.local_upper},
              {"fusion_upper", f.fusion_upper},
              {"certified_upper", f.certified},
              {"actual_upper", f.actual_upper},
              {"max_ratio", f.max_ratio},
              {"holds", f.holds}};
}

Json to_json(const ScanRow& row) {
  return Json{{"m", row.m},
              {"cutoffs", row.cutoffs},
              {"values", row.values},
              {"factors", row.factors},
              {"tag", row.divergent ? "Divergent" : "Bounded"}};
}

Json to_json(const EquivalenceReport& r) {
  return Json{{"relation", r.relation},
              {"pass", r.pass},
              {"max_defect", r.max_defect},
              {"downgrade", r.downgrade ? Json(*r.downgrade) : Json(nullptr)},
              {"unitary", r.unitary},
              {"fit_residual", r.fit_residual},
              {"excluded_dim", r.excluded_dim}};
}

}  // namespace semiframe::io
