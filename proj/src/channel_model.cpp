#include "pirs/channel_model.hpp"

#include <cmath>

#include "pirs/errors.hpp"

namespace pirs {

double distance(const Point3& a, const Point3& b) {
  return std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                   (a[2] - b[2]) * (a[2] - b[2]));
}

double path_loss(double d, double alpha, const LinkParams& params) {
  if (!(d > 0.0)) throw InvalidArgument("path_loss: distance must be positive");
  return params.beta0 * std::pow(d, -alpha);
}

CVec array_response(const Geometry& g, const Point3& target) {
  const double d = distance(g.irs_center, target);
  if (!(d > 0.0)) throw InvalidArgument("array_response: terminal coincides with the array");
  const double uy = (target[1] - g.irs_center[1]) / d;
  const double uz = (target[2] - g.irs_center[2]) / d;
  CVec a(g.elements());
  for (int r = 0; r < g.rows; ++r)
    for (int c = 0; c < g.cols; ++c) {
      const double y = (c - 0.5 * (g.cols - 1)) * g.spacing;
      const double z = (r - 0.5 * (g.rows - 1)) * g.spacing;
      a(r * g.cols + c) = std::polar(1.0, 2.0 * kPi * (y * uy + z * uz));
    }
  return a;
}

CVec rician_link(const CVec& los, double gain, double k_factor, Rng& rng) {
  double w_los = 1.0, w_nlos = 0.0;
  if (!std::isinf(k_factor)) {
    w_los = std::sqrt(k_factor / (k_factor + 1.0));
    w_nlos = std::sqrt(1.0 / (k_factor + 1.0));
  }
  // Draw the scattered part even when unused so stream consumption does not
  // depend on the Rician factor.
  const CVec nlos = complex_normal_vector(rng, los.size());
  return std::sqrt(gain) * (w_los * los + w_nlos * nlos);
}

ChannelRealization sample_channels(const Geometry& g, const LinkParams& p, Rng& rng) {
  if (g.rows < 1 || g.cols < 1) throw InvalidArgument("sample_channels: empty array");
  ChannelRealization ch;
  const double d_ui = distance(g.user, g.irs_center);
  const double d_ia = distance(g.irs_center, g.ap);
  ch.h_ui = rician_link(array_response(g, g.user), path_loss(d_ui, p.alpha_ui, p), p.k_ui, rng);
  ch.h_ia = rician_link(array_response(g, g.ap), path_loss(d_ia, p.alpha_ia, p), p.k_ia, rng);
  ch.h_cascaded = ch.h_ia.conjugate().cwiseProduct(ch.h_ui);
  return ch;
}

CVec aggregate(const CVec& h, const std::vector<PartitionState>& parts) {
  if (parts.empty()) throw InvalidArgument("aggregate: no partitions");
  const int L = parts[0].group_size;
  const int i = parts[0].block;
  if (static_cast<Eigen::Index>(parts.size()) * L != h.size())
    throw InvalidArgument("aggregate: channel length does not match groups x group size");
  CVec g = CVec::Zero(static_cast<Eigen::Index>(parts.size()) * i);
  for (size_t m = 0; m < parts.size(); ++m) {
    if (parts[m].block != i || parts[m].group_size != L)
      throw InvalidArgument("aggregate: partitions are at different blocks");
    for (int k = 0; k < i; ++k)
      for (int e : parts[m].subgroups[k]) g(m * i + k) += h(m * L + e);
  }
  return g;
}

CVec aggregate(const CVec& h, const PartitionState& partition, int M) {
  return aggregate(h, std::vector<PartitionState>(M, partition));
}

}  // namespace pirs
