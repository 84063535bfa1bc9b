#include "rdwkit/singularity.hpp"

#include "rdwkit/error.hpp"
#include "rdwkit/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <tuple>
#include <unordered_map>

namespace rdwkit {

double singular_tolerance(const GeometryParams& geom) noexcept {
  const double s = geom.scale();
  return 1e-9 * s * s * s;
}

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxSubdivisionDepth = 24;

struct Tracer {
  const GeometryParams& geom;
  double tol;
  double spacing;
  double cell;

  SingularSampleSet out;

  double det(double t2, double t3) const { return det_jacobian(geom, {0.0, t2, t3}); }

  CrossSectionPoint image(double t2, double t3) const {
    return cross_section(forward_kinematics(geom, {0.0, t2, t3}));
  }

  std::size_t add(double t2, double t3) {
    out.points.push_back(image(t2, t3));
    out.preimages.push_back({wrap_angle(t2), wrap_angle(t3)});
    return out.points.size() - 1;
  }

  // Bisection between two points of opposite det sign.
  std::optional<std::array<double, 2>> bisect(std::array<double, 2> a, std::array<double, 2> b) const {
    double fa = det(a[0], a[1]);
    for (int iter = 0; iter < 60; ++iter) {
      const std::array<double, 2> m{0.5 * (a[0] + b[0]), 0.5 * (a[1] + b[1])};
      const double fm = det(m[0], m[1]);
      if (fm == 0.0) return m;
      if ((fm > 0.0) == (fa > 0.0)) {
        a = m;
        fa = fm;
      } else {
        b = m;
      }
    }
    const double fb = det(b[0], b[1]);
    const auto& best = std::abs(fa) <= std::abs(fb) ? a : b;
    if (std::abs(det(best[0], best[1])) > tol) return std::nullopt;
    return best;
  }

  // Newton projection of a point onto det = 0 along the gradient.
  std::optional<std::array<double, 2>> project(std::array<double, 2> p) const {
    const std::array<double, 2> start = p;
    constexpr double h = 1e-7;
    for (int iter = 0; iter < 12; ++iter) {
      const double f = det(p[0], p[1]);
      if (std::abs(f) <= tol) {
        if (std::hypot(p[0] - start[0], p[1] - start[1]) > 2.0 * cell) return std::nullopt;
        return p;
      }
      const double g2 = (det(p[0] + h, p[1]) - det(p[0] - h, p[1])) / (2.0 * h);
      const double g3 = (det(p[0], p[1] + h) - det(p[0], p[1] - h)) / (2.0 * h);
      const double norm2 = g2 * g2 + g3 * g3;
      if (!(norm2 > 0.0)) return std::nullopt;
      p[0] -= f * g2 / norm2;
      p[1] -= f * g3 / norm2;
    }
    return std::nullopt;
  }

  static double gap(const CrossSectionPoint& a, const CrossSectionPoint& b) {
    return std::hypot(a.rho - b.rho, a.z - b.z);
  }

  // a and b are indices of samples connected along a branch.
  void densify(std::size_t a, std::size_t b, int depth) {
    const double d = gap(out.points[a], out.points[b]);
    if (d <= spacing || depth >= kMaxSubdivisionDepth) {
      out.max_gap = std::max(out.max_gap, d);
      return;
    }
    const auto pa = out.preimages[a];
    auto pb = out.preimages[b];
    // Unwrap b next to a on the torus.
    for (int k = 0; k < 2; ++k) pb[k] = pa[k] + wrap_angle(pb[k] - pa[k]);
    const auto mid = project({0.5 * (pa[0] + pb[0]), 0.5 * (pa[1] + pb[1])});
    if (!mid) {
      out.max_gap = std::max(out.max_gap, d);
      return;
    }
    const std::size_t m = add((*mid)[0], (*mid)[1]);
    densify(a, m, depth + 1);
    densify(m, b, depth + 1);
  }
};

}  // namespace

SingularSampleSet singular_set(const GeometryParams& geom, int grid_n, double spacing) {
  geom.validate();
  if (grid_n < 64) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 64");
  if (!(spacing > 0.0)) spacing = max_reach(geom) / 500.0;

  const int n = grid_n;
  const double h = 2.0 * kPi / n;
  auto angle = [&](int i) { return -kPi + h * i; };
  auto wrap = [&](int i) { return ((i % n) + n) % n; };

  Tracer tracer{geom, singular_tolerance(geom), spacing, h, {}};
  tracer.out.resolution = n;
  tracer.out.spacing = spacing;

  std::vector<double> values(static_cast<std::size_t>(n) * n);
  auto at = [&](int i, int j) -> double& {
    return values[static_cast<std::size_t>(wrap(i)) * n + wrap(j)];
  };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) at(i, j) = tracer.det(angle(i), angle(j));
  }
  auto positive = [&](int i, int j) { return at(i, j) >= 0.0; };

  // Edge key: 2 * (i * n + j) + dir, dir 0 = along theta2, 1 = along theta3.
  std::unordered_map<std::size_t, std::size_t> edge_root;
  auto edge_sample = [&](int i, int j, int dir) -> std::optional<std::size_t> {
    i = wrap(i);
    j = wrap(j);
    const int i2 = dir == 0 ? i + 1 : i;
    const int j2 = dir == 1 ? j + 1 : j;
    if (positive(i, j) == positive(i2, j2)) return std::nullopt;
    const std::size_t key = 2 * (static_cast<std::size_t>(i) * n + j) + dir;
    if (auto it = edge_root.find(key); it != edge_root.end()) return it->second;
    const auto root = tracer.bisect({angle(i), angle(j)}, {angle(i2), angle(j2)});
    if (!root) return std::nullopt;
    const std::size_t idx = tracer.add((*root)[0], (*root)[1]);
    edge_root.emplace(key, idx);
    return idx;
  };

  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      // Cell edges: bottom, right, top, left.
      const std::array<std::optional<std::size_t>, 4> e{
          edge_sample(i, j, 0), edge_sample(i + 1, j, 1), edge_sample(i, j + 1, 0),
          edge_sample(i, j, 1)};
      std::vector<int> crossing;
      for (int k = 0; k < 4; ++k) {
        if (e[k]) crossing.push_back(k);
      }
      if (crossing.size() == 2) {
        tracer.densify(*e[crossing[0]], *e[crossing[1]], 0);
      } else if (crossing.size() == 4) {
        const bool centre = tracer.det(angle(i) + 0.5 * h, angle(j) + 0.5 * h) >= 0.0;
        if (centre == positive(i, j)) {
          // Corner (i, j) region runs through the centre; cut off the other two corners.
          tracer.densify(*e[0], *e[1], 0);
          tracer.densify(*e[2], *e[3], 0);
        } else {
          tracer.densify(*e[3], *e[0], 0);
          tracer.densify(*e[1], *e[2], 0);
        }
      } else if (crossing.size() == 1 || crossing.size() == 3) {
        // A root failed to refine; keep whatever was found without linking.
      }
    }
  }

  SingularSampleSet& out = tracer.out;
  if (out.empty()) {
    throw Error(ErrorCode::EmptySingularSet, "det J has no sign change on the joint grid");
  }

  std::vector<std::size_t> order(out.size());
  for (std::size_t k = 0; k < order.size(); ++k) order[k] = k;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const auto& pa = out.points[a];
    const auto& pb = out.points[b];
    return std::tie(pa.rho, pa.z, out.preimages[a], a) < std::tie(pb.rho, pb.z, out.preimages[b], b);
  });
  SingularSampleSet sorted;
  sorted.resolution = out.resolution;
  sorted.spacing = out.spacing;
  sorted.max_gap = out.max_gap;
  sorted.points.reserve(out.size());
  sorted.preimages.reserve(out.size());
  for (std::size_t k : order) {
    sorted.points.push_back(out.points[k]);
    sorted.preimages.push_back(out.preimages[k]);
  }
  return sorted;
}

std::vector<double> axis_crossings(const SingularSampleSet& samples, double band) {
  if (!(band > 0.0)) band = 2.0 * samples.max_gap;
  if (!(band > 0.0)) band = samples.spacing;
  if (!(band > 0.0)) throw Error(ErrorCode::InvalidArgument, "band must be > 0");

  std::vector<CrossSectionPoint> near_axis;
  for (const auto& p : samples.points) {
    if (std::abs(p.z) <= band) near_axis.push_back(p);
  }
  if (near_axis.empty()) {
    throw Error(ErrorCode::EmptyCrossings, "no singular sample within the z = 0 band");
  }
  std::sort(near_axis.begin(), near_axis.end(),
            [](const auto& a, const auto& b) { return a.rho < b.rho; });

  std::vector<double> crossings;
  double best_z = INFINITY;
  double best_rho = near_axis.front().rho;
  double last_rho = near_axis.front().rho;
  for (const auto& p : near_axis) {
    if (p.rho - last_rho > band) {
      crossings.push_back(best_rho);
      best_z = INFINITY;
    }
    if (std::abs(p.z) < best_z) {
      best_z = std::abs(p.z);
      best_rho = p.rho;
    }
    last_rho = p.rho;
  }
  crossings.push_back(best_rho);
  return crossings;
}

double max_reach(const GeometryParams& geom, int grid_n) {
  geom.validate();
  if (grid_n < 64) throw Error(ErrorCode::InvalidArgument, "grid_n must be >= 64");
  const double h = 2.0 * kPi / grid_n;

  auto reach2 = [&](double t2, double t3) {
    const CartesianPoint p = forward_kinematics(geom, {0.0, t2, t3});
    return p.x * p.x + p.y * p.y + p.z * p.z;
  };

  double best = -1.0;
  std::vector<double> start{0.0, 0.0};
  for (int i = 0; i < grid_n; ++i) {
    for (int j = 0; j < grid_n; ++j) {
      const double t2 = -kPi + h * i, t3 = -kPi + h * j;
      const double r = reach2(t2, t3);
      if (r > best) {
        best = r;
        start = {t2, t3};
      }
    }
  }

  HjOptions opts;
  opts.initial_step = h;
  opts.min_step = 1e-10;
  const HjResult refined = hooke_jeeves(
      [&](std::span<const double> q) { return reach2(q[0], q[1]); }, start, opts);
  return std::sqrt(std::max(best, refined.f));
}

}  // namespace rdwkit
