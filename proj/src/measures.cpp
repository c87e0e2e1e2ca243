#include "mmot/measures.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace mmot {

namespace {
constexpr double kMassTol = 1e-12;
}

RadialMeasure::RadialMeasure(std::vector<MeasurePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw InvalidMeasure("measure needs at least one piece");
  std::sort(pieces_.begin(), pieces_.end(),
            [](const MeasurePiece& a, const MeasurePiece& b) { return a.lo < b.lo; });
  double mass = 0.0;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const MeasurePiece& p = pieces_[i];
    if (!(p.lo >= 0.0) || !(p.hi > p.lo) || !(p.density >= 0.0) ||
        !std::isfinite(p.lo) || !std::isfinite(p.hi) || !std::isfinite(p.density))
      throw InvalidMeasure("piece must satisfy 0 <= lo < hi, density >= 0");
    if (i > 0 && p.lo < pieces_[i - 1].hi - 1e-15)
      throw InvalidMeasure("pieces must be disjoint");
    cum_.push_back(mass);
    mass += p.density * (p.hi - p.lo);
  }
  if (std::fabs(mass - 1.0) > kMassTol)
    throw InvalidMeasure("total mass must be 1, got " + std::to_string(mass));
}

RadialMeasure RadialMeasure::uniform(double lo, double hi) {
  return RadialMeasure({{lo, hi, 1.0 / (hi - lo)}});
}

RadialMeasure RadialMeasure::from_json(std::istream& in) {
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidMeasure(std::string("bad measure JSON: ") + e.what());
  }
  if (!j.is_array()) throw InvalidMeasure("measure JSON must be an array of pieces");
  std::vector<MeasurePiece> pieces;
  for (const auto& item : j) {
    if (!item.contains("lo") || !item.contains("hi") || !item.contains("density"))
      throw InvalidMeasure("piece needs lo, hi, density");
    pieces.push_back({item["lo"].get<double>(), item["hi"].get<double>(),
                      item["density"].get<double>()});
  }
  return RadialMeasure(std::move(pieces));
}

RadialMeasure RadialMeasure::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidMeasure("cannot open measure file " + path);
  return from_json(in);
}

std::string RadialMeasure::to_json() const {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& p : pieces_)
    j.push_back({{"lo", p.lo}, {"hi", p.hi}, {"density", p.density}});
  return j.dump();
}

double RadialMeasure::cdf(double x) const {
  double mass = 0.0;
  for (const auto& p : pieces_) {
    if (x <= p.lo) break;
    mass += p.density * (std::min(x, p.hi) - p.lo);
  }
  return mass;
}

double RadialMeasure::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) throw Error("quantile argument outside [0,1]");
  size_t last_positive = pieces_.size();
  for (size_t i = 0; i < pieces_.size(); ++i)
    if (pieces_[i].density > 0.0) last_positive = i;
  for (size_t i = 0; i < pieces_.size(); ++i) {
    const MeasurePiece& p = pieces_[i];
    if (p.density <= 0.0) continue;
    const double mass = p.density * (p.hi - p.lo);
    // mass levels within rounding of a piece's top belong to the next piece,
    // so a level shared across a support gap resolves to the gap's far side
    if (q < cum_[i] + mass - 1e-12 || i == last_positive) {
      const double x = p.lo + (q - cum_[i]) / p.density;
      return std::clamp(x, p.lo, p.hi);
    }
  }
  return pieces_.back().hi;  // unreachable given a valid measure
}

bool RadialMeasure::in_support(double x) const {
  for (const auto& p : pieces_)
    if (p.density > 0.0 && x >= p.lo && x <= p.hi) return true;
  return false;
}

std::vector<double> breakpoints(const RadialMeasure& rho, int n_marginals) {
  if (n_marginals != 3 && n_marginals != 4)
    throw ArityMismatch("breakpoints needs N in {3,4}");
  std::vector<double> out;
  for (int i = 1; i < n_marginals; ++i)
    out.push_back(rho.quantile(static_cast<double>(i) / n_marginals));
  return out;
}

// ---------------------------------------------------------------------------

bool MonotoneMap::pattern_admissible(const std::string& pattern) {
  if (pattern.size() != 3 && pattern.size() != 4) return false;
  bool flip = false;
  for (char c : pattern) {
    if (c == 'D')
      flip = !flip;
    else if (c != 'I')
      return false;
  }
  // The N-fold composition rearranges each cell onto itself; it is the
  // identity exactly when the accumulated orientation is increasing.
  return !flip;
}

std::vector<std::string> MonotoneMap::admissible_patterns(int n_marginals) {
  if (n_marginals != 3 && n_marginals != 4)
    throw ArityMismatch("admissible_patterns needs N in {3,4}");
  std::vector<std::string> out;
  for (int mask = 0; mask < (1 << n_marginals); ++mask) {
    std::string p;
    for (int i = 0; i < n_marginals; ++i) p += (mask & (1 << i)) ? 'I' : 'D';
    if (pattern_admissible(p)) out.push_back(p);
  }
  std::sort(out.begin(), out.end());
  return out;
}

MonotoneMap::MonotoneMap(RadialMeasure rho, std::string pattern)
    : rho_(std::move(rho)), pattern_(std::move(pattern)) {
  if (!pattern_admissible(pattern_))
    throw InadmissiblePattern("pattern " + pattern_ + " does not close into the identity");
  n_ = static_cast<int>(pattern_.size());
  breaks_ = mmot::breakpoints(rho_, n_);
}

double MonotoneMap::mass_step(double u) const {
  const double invn = 1.0 / n_;
  int k = static_cast<int>(u * n_);
  if (k >= n_) k = n_ - 1;
  const double local = u - k * invn;
  const int next = (k + 1) % n_;
  const double local_next = pattern_[static_cast<size_t>(k)] == 'I' ? local : invn - local;
  return next * invn + local_next;
}

double MonotoneMap::operator()(double x) const {
  return rho_.quantile(mass_step(rho_.cdf(x)));
}

RadiiTuple MonotoneMap::orbit(double x) const {
  if (!rho_.in_support(x)) throw Error("orbit start outside the support");
  for (double d : breaks_)
    if (std::fabs(x - d) <= 1e-12)
      throw BreakpointHit("orbit start within 1e-12 of a breakpoint");
  double pts[4];
  pts[0] = x;
  double u = rho_.cdf(x);
  for (int i = 1; i < n_; ++i) {
    u = mass_step(u);
    pts[i] = rho_.quantile(u);
  }
  return RadiiTuple(std::span<const double>(pts, static_cast<size_t>(n_)));
}

double MonotoneMap::map_cost(const CostFn& cost, int n_quad) const {
  if (n_quad < 2) throw Error("map_cost needs n_quad >= 2");
  double total = 0.0;
  double pts[4];
  for (int i = 1; i <= n_quad; ++i) {
    double u = (i - 0.5) / n_quad;
    pts[0] = rho_.quantile(u);
    for (int s = 1; s < n_; ++s) {
      u = mass_step(u);
      pts[s] = rho_.quantile(u);
    }
    total += cost(RadiiTuple(std::span<const double>(pts, static_cast<size_t>(n_))));
  }
  return total / n_quad;
}

}  // namespace mmot
