#pragma once

#include <array>
#include <vector>

#include "pirs/random.hpp"
#include "pirs/subgroup_partition.hpp"

namespace pirs {

using Point3 = std::array<double, 3>;

/// Positions in meters. The IRS is a rows x cols array in the y-z plane,
/// element spacing in wavelengths, elements in row-major raster order.
struct Geometry {
  Point3 user{20.0, 40.0, 0.0};
  Point3 ap{20.0, 0.0, 0.0};
  Point3 irs_center{18.0, 30.0, 0.0};
  int rows = 8;
  int cols = 10;
  double spacing = 0.5;

  int elements() const { return rows * cols; }
};

/// Linear-scale link parameters (reference distance 1 m).
struct LinkParams {
  double beta0 = 1e-3;
  double alpha_ui = 2.2;
  double alpha_ia = 2.5;
  double k_ui = 1.9952623149688795;  // 3 dB
  double k_ia = 0.01;                // -20 dB
};

struct ChannelRealization {
  CVec h_ui;
  CVec h_ia;  // stored un-conjugated
  CVec h_cascaded;

  // Elements m*L .. m*L + L - 1.
  CVec group(int m, int L) const { return h_cascaded.segment(static_cast<Eigen::Index>(m) * L, L); }
};

double distance(const Point3& a, const Point3& b);

// beta0 * d^-alpha.
double path_loss(double d, double alpha, const LinkParams& params);

// Unit-modulus planar steering vector of the array toward `target`.
CVec array_response(const Geometry& geometry, const Point3& target);

// Rician link: sqrt(beta) (sqrt(K/(K+1)) LoS + sqrt(1/(K+1)) NLoS).
CVec rician_link(const CVec& los, double gain, double k_factor, Rng& rng);

ChannelRealization sample_channels(const Geometry& geometry, const LinkParams& params, Rng& rng);

// Group-major stacking of subgroup sums; all partitions at the same block.
CVec aggregate(const CVec& h_cascaded, const std::vector<PartitionState>& partitions);

// Same partition applied to each of M groups.
CVec aggregate(const CVec& h_cascaded, const PartitionState& partition, int M);

}  // namespace pirs
