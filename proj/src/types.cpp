#include "masim/types.hpp"

#include <sstream>

namespace masim {

namespace {

void validate_positions(const std::vector<Vec2>& pos, double region_size,
                        double min_spacing) {
  const double half = region_size / 2.0;
  for (size_t n = 0; n < pos.size(); ++n) {
    if (!pos[n].allFinite()) {
      throw ApvError("antenna " + std::to_string(n) + " has non-finite coordinates");
    }
    if (std::abs(pos[n].x()) > half || std::abs(pos[n].y()) > half) {
      std::ostringstream os;
      os << "antenna " << n << " at (" << pos[n].x() << ", " << pos[n].y()
         << ") outside region [-" << half << ", " << half << "]^2";
      throw ApvError(os.str());
    }
  }
  for (size_t n = 0; n < pos.size(); ++n) {
    for (size_t m = n + 1; m < pos.size(); ++m) {
      const double d = (pos[n] - pos[m]).norm();
      if (d < min_spacing) {
        std::ostringstream os;
        os << "antennas " << n << " and " << m << " spaced " << d
           << " m < D_min = " << min_spacing << " m";
        throw ApvError(os.str());
      }
    }
  }
}

}  // namespace

Apv::Apv(std::vector<Vec2> positions, double region_size, double min_spacing)
    : pos_(std::move(positions)),
      region_size_(region_size),
      min_spacing_(min_spacing) {
  if (pos_.empty()) throw ApvError("APV needs at least one antenna");
  if (region_size <= 0.0) throw ApvError("region size must be positive");
  if (min_spacing < 0.0) throw ApvError("min spacing must be non-negative");
  validate_positions(pos_, region_size_, min_spacing_);
}

Apv Apv::with_position(int n, const Vec2& p) const {
  std::vector<Vec2> pos = pos_;
  pos.at(static_cast<size_t>(n)) = p;
  return Apv(std::move(pos), region_size_, min_spacing_);
}

Beamformer::Beamformer(Vec w, double p_max, double eps_pow)
    : w_(std::move(w)), p_max_(p_max) {
  if (w_.size() == 0) throw DimensionError("empty beamformer");
  if (!w_.allFinite()) throw SolverError("beamformer has non-finite entries");
  if (p_max_ <= 0.0) throw ConfigError("p_max must be positive");
  const double pw = w_.squaredNorm();
  if (pw > p_max_ * (1.0 + eps_pow)) {
    std::ostringstream os;
    os << "beamformer power " << pw << " W exceeds budget " << p_max_ << " W";
    throw SolverError(os.str());
  }
}

}  // namespace masim
