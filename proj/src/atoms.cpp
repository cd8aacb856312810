#include "semiframe/atoms.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numbers>

#include "semiframe/random.hpp"

namespace semiframe {

namespace {

std::string format_number(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, end);
}

double parse_number(std::string_view s, std::string_view context) {
  double value = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw Error(ErrorKind::ParseError, "cannot parse number '" + std::string(s) +
                                           "' in weight rule '" + std::string(context) + "'");
  return value;
}

std::string strip_spaces(std::string_view s) {
  std::string out;
  for (char c : s)
    if (c != ' ' && c != '\t') out.push_back(c);
  return out;
}

}  // namespace

VectorSystem::VectorSystem(CMatrix atoms, RVector weights, std::string label)
    : atoms_(std::move(atoms)), weights_(std::move(weights)), label_(std::move(label)) {
  if (atoms_.rows() < 1) throw Error(ErrorKind::DimensionMismatch, "d ≥ 1 required");
  if (atoms_.cols() < 1) throw Error(ErrorKind::DimensionMismatch, "N ≥ 1 required");
  if (weights_.size() == 0) {
    weights_ = RVector::Ones(atoms_.cols());
  } else if (weights_.size() != atoms_.cols()) {
    throw Error(ErrorKind::DimensionMismatch,
                "weights must have one entry per atom (got " + std::to_string(weights_.size()) +
                    " for N = " + std::to_string(atoms_.cols()) + ")");
  }
  for (Index k = 0; k < weights_.size(); ++k) {
    if (!(std::abs(weights_(k)) > 0.0) || !std::isfinite(weights_(k)))
      throw Error(ErrorKind::InvalidWeight, "weight " + std::to_string(k) + " must be nonzero");
  }
  if (!atoms_.allFinite()) throw Error(ErrorKind::DimensionMismatch, "atoms must be finite");
}

CMatrix VectorSystem::synthesis_matrix() const {
  if (unit_weights()) return atoms_;
  return atoms_ * weights_.cast<Complex>().asDiagonal();
}

bool VectorSystem::unit_weights() const { return (weights_.array() == 1.0).all(); }

double WeightRule::operator()(Index k) const {
  const double kk = static_cast<double>(k);
  switch (kind) {
    case Kind::Power: return scale * std::pow(kk, param);
    case Kind::Exponential: return scale * std::exp(-param * kk);
    case Kind::Constant: return scale;
  }
  return 0.0;
}

std::string WeightRule::tag() const {
  std::string prefix = (kind != Kind::Constant && scale != 1.0) ? format_number(scale) + "*" : "";
  switch (kind) {
    case Kind::Power:
      if (param == -1.0) return prefix + "1/k";
      if (param == 1.0) return prefix + "k";
      if (param < 0.0) return prefix + "1/k^" + format_number(-param);
      return prefix + "k^" + format_number(param);
    case Kind::Exponential:
      if (param == 1.0) return prefix + "exp(-k)";
      return prefix + "exp(-" + format_number(param) + "*k)";
    case Kind::Constant:
      return format_number(scale);
  }
  return {};
}

WeightRule WeightRule::parse(std::string_view raw) {
  const std::string tag = strip_spaces(raw);
  std::string_view s = tag;
  if (s.empty()) throw Error(ErrorKind::ParseError, "empty weight rule");

  double scale = 1.0;
  if (auto star = s.find('*'); star != std::string_view::npos && !s.starts_with("exp(")) {
    scale = parse_number(s.substr(0, star), raw);
    s.remove_prefix(star + 1);
  }

  if (s == "k") return power(1.0, scale);
  if (s == "1/k") return power(-1.0, scale);
  if (s.starts_with("1/k^")) return power(-parse_number(s.substr(4), raw), scale);
  if (s.starts_with("k^")) return power(parse_number(s.substr(2), raw), scale);
  if (s.starts_with("exp(-") && s.ends_with(")")) {
    std::string_view inner = s.substr(5, s.size() - 6);
    if (inner == "k") return exponential(1.0, scale);
    if (inner.ends_with("*k")) return exponential(parse_number(inner.substr(0, inner.size() - 2), raw), scale);
  }
  if (s.find('k') == std::string_view::npos) return constant(scale * parse_number(s, raw));
  throw Error(ErrorKind::ParseError, "unrecognised weight rule '" + std::string(raw) + "'");
}

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::WeightedDiag: return "weighted_diag";
    case Generator::OperatorImage: return "operator_image";
    case Generator::Gabor: return "gabor";
    case Generator::Custom: return "custom";
  }
  return "custom";
}

Generator parse_generator(std::string_view name) {
  if (name == "weighted_diag") return Generator::WeightedDiag;
  if (name == "operator_image") return Generator::OperatorImage;
  if (name == "gabor") return Generator::Gabor;
  if (name == "custom") return Generator::Custom;
  throw Error(ErrorKind::ParseError, "unknown generator '" + std::string(name) + "'");
}

TruncationFamily::TruncationFamily(FamilyParams params, std::vector<Index> sizes)
    : params_(std::move(params)), sizes_(std::move(sizes)) {
  if (sizes_.empty()) throw Error(ErrorKind::InvalidFamily, "family needs at least one size");
  for (std::size_t i = 0; i < sizes_.size(); ++i) {
    if (sizes_[i] < 1) throw Error(ErrorKind::InvalidFamily, "sizes must be positive");
    if (i > 0 && sizes_[i] <= sizes_[i - 1])
      throw Error(ErrorKind::InvalidFamily, "sizes must be strictly increasing");
  }
  if (const auto* op = std::get_if<OperatorImageParams>(&params_)) {
    if (op->base.rows() != op->base.cols() || op->base.rows() < 1)
      throw Error(ErrorKind::DimensionMismatch, "operator_image base must be square");
  }
  if (const auto* ix = std::get_if<IndexedParams>(&params_)) {
    if (ix->index.size() != ix->weights.size())
      throw Error(ErrorKind::DimensionMismatch, "custom index and weights lengths differ");
    if (static_cast<Index>(ix->index.size()) < sizes_.back())
      throw Error(ErrorKind::InvalidFamily, "custom enumeration shorter than the largest size");
  }
  if (const auto* cp = std::get_if<CallableParams>(&params_)) {
    if (!cp->realize) throw Error(ErrorKind::InvalidFamily, "custom family without generator");
  }
}

Generator TruncationFamily::generator() const {
  switch (params_.index()) {
    case 0: return Generator::WeightedDiag;
    case 1: return Generator::OperatorImage;
    case 2: return Generator::Gabor;
    default: return Generator::Custom;
  }
}

TruncationFamily TruncationFamily::with_sizes(std::vector<Index> sizes) const {
  return TruncationFamily(params_, std::move(sizes));
}

VectorSystem make_weighted_diag(const std::vector<double>& weights, Index dim) {
  const Index n = static_cast<Index>(weights.size());
  if (n < 1) throw Error(ErrorKind::DimensionMismatch, "N ≥ 1 required");
  if (dim < n) throw Error(ErrorKind::DimensionMismatch, "weighted diagonal system needs d >= N");
  CMatrix atoms = CMatrix::Zero(dim, n);
  for (Index k = 0; k < n; ++k) {
    if (!(std::abs(weights[k]) > 0.0))
      throw Error(ErrorKind::InvalidWeight, "weight " + std::to_string(k + 1) + " is zero");
    atoms(k, k) = weights[k];
  }
  return VectorSystem(std::move(atoms), RVector(), "weighted_diag");
}

VectorSystem make_operator_image(const CMatrix& v, Index count) {
  if (v.rows() != v.cols()) throw Error(ErrorKind::DimensionMismatch, "V must be square");
  if (count < 1 || count > v.cols())
    throw Error(ErrorKind::DimensionMismatch, "operator image needs 1 <= N <= d");
  return VectorSystem(v.leftCols(count), RVector(), "operator_image");
}

VectorSystem make_finite_gabor(const CVector& window, Index a, Index b) {
  const Index d = window.size();
  if (d < 1) throw Error(ErrorKind::InvalidWindow, "empty window");
  if (a < 1 || b < 1 || d % a != 0 || d % b != 0)
    throw Error(ErrorKind::LatticeMismatch, "lattice parameters must divide d = " + std::to_string(d));
  if (window.norm() == 0.0) throw Error(ErrorKind::InvalidWindow, "window is zero");

  const Index shifts = d / a;
  const Index mods = d / b;
  CMatrix atoms(d, shifts * mods);
  const double two_pi = 2.0 * std::numbers::pi;
  for (Index m = 0; m < shifts; ++m) {
    for (Index n = 0; n < mods; ++n) {
      auto col = atoms.col(m * mods + n);
      for (Index j = 0; j < d; ++j) {
        // reduce n*b*j mod d before forming the phase
        const Index phase_index = (n * b * j) % d;
        const Complex phase = std::polar(1.0, two_pi * static_cast<double>(phase_index) / static_cast<double>(d));
        col(j) = phase * window(((j - m * a) % d + d) % d);
      }
    }
  }
  return VectorSystem(std::move(atoms), RVector(),
                      "gabor(a=" + std::to_string(a) + ",b=" + std::to_string(b) + ")");
}

CVector gaussian_window(Index d) {
  CVector g(d);
  const double dd = static_cast<double>(d);
  for (Index j = 0; j < d; ++j) {
    double sum = 0.0;
    for (int t = -3; t <= 3; ++t) {
      const double x = static_cast<double>(j) - t * dd;
      sum += std::exp(-std::numbers::pi * x * x / dd);
    }
    g(j) = sum;
  }
  return g / g.norm();
}

namespace {

VectorSystem realize_diag(const DiagParams& p, Index size) {
  std::vector<double> w(size);
  for (Index k = 0; k < size; ++k) w[k] = p.rule(k + 1);
  VectorSystem sys = make_weighted_diag(w, size);
  return VectorSystem(sys.atoms(), RVector(), "weighted_diag(" + p.rule.tag() + ")");
}

VectorSystem realize_operator(const OperatorImageParams& p, Index size) {
  const Index base = p.base.rows();
  CMatrix v = CMatrix::Identity(size, size);
  const Index overlap = std::min(base, size);
  v.topLeftCorner(overlap, overlap) = p.base.topLeftCorner(overlap, overlap);
  VectorSystem sys = make_operator_image(v, size);
  return VectorSystem(sys.atoms(), RVector(), "operator_image");
}

VectorSystem realize_gabor(const GaborParams& p, Index d) {
  CVector window;
  switch (p.window) {
    case GaborParams::Window::Gaussian: window = gaussian_window(d); break;
    case GaborParams::Window::Delta:
      window = CVector::Zero(d);
      window(0) = 1.0;
      break;
    case GaborParams::Window::Constant:
      window = CVector::Constant(d, 1.0 / std::sqrt(static_cast<double>(d)));
      break;
  }
  Index a = p.a;
  Index b = p.b;
  if (p.critical) {
    a = static_cast<Index>(std::ceil(std::sqrt(static_cast<double>(d)) - 1e-9));
    b = a;
  }
  return make_finite_gabor(window, a, b);
}

VectorSystem realize_indexed(const IndexedParams& p, Index size) {
  if (size > static_cast<Index>(p.index.size()))
    throw Error(ErrorKind::IndexError, "custom enumeration has only " +
                                           std::to_string(p.index.size()) + " atoms");
  Index dim = 0;
  for (Index k = 0; k < size; ++k) {
    if (p.index[k] < 1) throw Error(ErrorKind::InvalidFamily, "custom indices are 1-based");
    dim = std::max(dim, p.index[k]);
  }
  CMatrix atoms = CMatrix::Zero(dim, size);
  for (Index k = 0; k < size; ++k) {
    if (!(std::abs(p.weights[k]) > 0.0))
      throw Error(ErrorKind::InvalidWeight, "custom weight " + std::to_string(k + 1) + " is zero");
    atoms(p.index[k] - 1, k) = p.weights[k];
  }
  return VectorSystem(std::move(atoms), RVector(), "custom(indexed)");
}

}  // namespace

VectorSystem realize_at(const TruncationFamily& family, Index size) {
  return std::visit(
      [size](const auto& p) -> VectorSystem {
        using P = std::decay_t<decltype(p)>;
        if constexpr (std::is_same_v<P, DiagParams>) return realize_diag(p, size);
        else if constexpr (std::is_same_v<P, OperatorImageParams>) return realize_operator(p, size);
        else if constexpr (std::is_same_v<P, GaborParams>) return realize_gabor(p, size);
        else if constexpr (std::is_same_v<P, IndexedParams>) return realize_indexed(p, size);
        else return p.realize(size);
      },
      family.params());
}

VectorSystem realize_truncation(const TruncationFamily& family, Index t) {
  if (t < 1 || t > family.count())
    throw Error(ErrorKind::IndexError, "truncation index " + std::to_string(t) + " outside 1.." +
                                           std::to_string(family.count()));
  return realize_at(family, family.sizes()[t - 1]);
}

RVector diagonal_gram(const TruncationFamily& family, Index size) {
  const auto* p = std::get_if<DiagParams>(&family.params());
  if (p == nullptr) throw Error(ErrorKind::InvalidFamily, "diagonal Gram needs a weighted_diag family");
  RVector g(size);
  for (Index k = 0; k < size; ++k) {
    const double m = p->rule(k + 1);
    if (!(std::abs(m) > 0.0)) throw Error(ErrorKind::InvalidWeight, "weight rule vanishes at k = " + std::to_string(k + 1));
    g(k) = m * m;
  }
  return g;
}

}  // namespace semiframe
