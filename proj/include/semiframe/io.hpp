#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "json.hpp"
#include "semiframe/continuum.hpp"
#include "semiframe/duality.hpp"
#include "semiframe/equivalence.hpp"
#include "semiframe/scale.hpp"

namespace semiframe::io {

using Json = nlohmann::ordered_json;

// Parse failures become ParseError naming the source, line and column.
Json parse(std::string_view text, std::string_view source = "<input>");
Json load(const std::filesystem::path& path);

// Complex numbers are [re, im] or a bare real. Matrices are lists of columns.
Complex complex_from(const Json& j, const std::string& where);
Json to_json(Complex z);
CMatrix matrix_from(const Json& j, const std::string& where, Index rows = -1);
Json to_json(const CMatrix& m);
Json to_json(const RVector& v);

VectorSystem system_from(const Json& j);
Json to_json(const VectorSystem& sys);

TruncationFamily family_from(const Json& j);
Json to_json(const TruncationFamily& family);

FusionSystem fusion_from(const Json& j);
Json to_json(const FusionSystem& fs);

// Grid/profile input: n, r, u, optional x and w (nodes), optional atoms
// (per node, one value per grid point), optional profile s.
struct ContinuumInput {
  RadialGrid grid;
  std::optional<RVector> x;
  std::optional<RVector> w;
  std::optional<CMatrix> atoms;
  std::optional<RVector> s;
};
ContinuumInput continuum_from(const Json& j);
// Explicit atoms, explicit nodes with affine atoms, or the Fourier rule with `nodes` nodes.
SampledContinuousFrame build_frame(const ContinuumInput& in, Index nodes);

RankNSystem rank_n_from(const Json& j);
Json to_json(const RankNSystem& rs);

Json to_json(const BoundsReport& r);
Json to_json(const SemiFrameVerdict& v);
Json to_json(const BoundTrends& t);
Json to_json(const RegularityReport& r);
Json to_json(const EndSpaceProbe& p);
Json to_json(const DualPairReport& r);
Json to_json(const BesselPairReport& r);
Json to_json(const FusionFromFrame& f);
Json to_json(const FrameFromFusion& f);
Json to_json(const ScanRow& row);
Json to_json(const EquivalenceReport& r);

}  // namespace semiframe::io
