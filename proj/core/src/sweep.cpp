#include "rdwkit/sweep.hpp"

#include "rdwkit/error.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <map>
#include <mutex>
#include <optional>
#include <thread>

namespace rdwkit {

int Axis::count() const noexcept {
  if (!(step > 0.0) || max < min) return 0;
  return static_cast<int>(std::floor((max - min) / step + 1e-9)) + 1;
}

double Axis::value(int index) const noexcept { return min + step * index; }

std::array<std::string_view, 2> axis_names(ManipulatorType type) {
  switch (type) {
    case ManipulatorType::B1:
    case ManipulatorType::G: return {"d3", "d4"};
    case ManipulatorType::C:
    case ManipulatorType::H: return {"r2", "d4"};
    case ManipulatorType::E: return {"d2", "d4"};
    case ManipulatorType::Generic: break;
  }
  throw Error(ErrorCode::InvalidArgument, "Generic manipulators have no sweep axes");
}

GeometryParams geometry_for(ManipulatorType type, double p1, double p2) {
  GeometryParams g{0.0, 0.0, p2, 0.0, 0.0};
  switch (type) {
    case ManipulatorType::B1: g.d3 = p1; break;
    case ManipulatorType::C: g.r2 = p1; break;
    case ManipulatorType::E: g.d2 = p1; break;
    case ManipulatorType::G:
      g.d3 = p1;
      g.r3 = 1.0;
      break;
    case ManipulatorType::H:
      g.r2 = p1;
      g.r3 = 1.0;
      break;
    case ManipulatorType::Generic:
      throw Error(ErrorCode::InvalidArgument, "Generic manipulators have no sweep axes");
  }
  return g;
}

GridSpec GridSpec::uniform(ManipulatorType type, double min, double max, double step) {
  return {type, {min, max, step}, {min, max, step}};
}

void GridSpec::validate() const {
  axis_names(type);
  for (const Axis* axis : {&p1, &p2}) {
    if (!(axis->min > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid min must be > 0");
    if (!(axis->max > axis->min)) throw Error(ErrorCode::InvalidArgument, "grid max must exceed min");
    if (!(axis->step > 0.0)) throw Error(ErrorCode::InvalidArgument, "grid step must be > 0");
  }
}

double EtaField::value(std::size_t i, std::size_t j) const {
  const EtaCell& cell = at(i, j);
  return cell.valid() ? cell.eta : 0.0;
}

const EtaCell* EtaField::max_cell() const noexcept {
  const EtaCell* best = nullptr;
  for (const auto& cell : cells) {
    if (cell.valid() && (!best || cell.eta > best->eta)) best = &cell;
  }
  return best;
}

namespace {

EtaCell evaluate_cell(ManipulatorType type, double p1, double p2, double k_min_inv,
                      const RdwConfig& config) {
  EtaCell cell;
  cell.p1 = p1;
  cell.p2 = p2;
  const GeometryParams geom = geometry_for(type, p1, p2);
  if (type == ManipulatorType::B1 && !(p1 > p2)) {
    cell.mask_reason = kMaskB2Region;
    return cell;
  }
  try {
    check_type(type, geom);
    const RdwResult r = compute_rdw(geom, k_min_inv, config);
    cell.eta = r.eta;
    cell.a_rdw = r.rdw_square.edge();
    cell.rho_max = r.rho_max;
    cell.center = r.rdw_square.center;
  } catch (const Error& e) {
    cell.mask_reason = std::string(to_string(e.code()));
  }
  return cell;
}

}  // namespace

EtaField sweep_eta(const GridSpec& grid, double k_min_inv, const SweepConfig& config) {
  grid.validate();
  config.rdw.validate();
  if (!(k_min_inv > 0.0 && k_min_inv < 1.0)) {
    throw Error(ErrorCode::InvalidArgument, "k_min_inv must lie in (0, 1)");
  }

  EtaField field;
  field.type = grid.type;
  for (int i = 0; i < grid.p1.count(); ++i) field.p1_values.push_back(grid.p1.value(i));
  for (int j = 0; j < grid.p2.count(); ++j) field.p2_values.push_back(grid.p2.value(j));
  const std::size_t total = field.rows() * field.cols();
  field.cells.resize(total);

  int jobs = config.jobs > 0 ? config.jobs : static_cast<int>(std::thread::hardware_concurrency());
  jobs = std::clamp(jobs, 1, static_cast<int>(std::max<std::size_t>(total, 1)));

  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;
  auto worker = [&] {
    for (std::size_t k = next++; k < total; k = next++) {
      const std::size_t i = k / field.cols(), j = k % field.cols();
      field.cells[k] = evaluate_cell(grid.type, field.p1_values[i], field.p2_values[j], k_min_inv,
                                     config.rdw);
      if (config.progress) {
        std::lock_guard lock(progress_mutex);
        config.progress(++done, total);
      }
    }
  };

  if (jobs == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }
  return field;
}

namespace {

// Identifies a vertex on the grid edge from node (i, j) towards +p1 (dir 0) or +p2 (dir 1).
struct EdgeKey {
  std::size_t i, j;
  int dir;

  auto operator<=>(const EdgeKey&) const = default;
};

struct Segment {
  EdgeKey a, b;
};

}  // namespace

ContourSet extract_contours(const EtaField& field, std::span<const double> levels) {
  ContourSet out;
  const std::size_t rows = field.rows(), cols = field.cols();

  for (double level : levels) {
    Contour contour;
    contour.level = level;
    if (rows < 2 || cols < 2) {
      out.contours.push_back(std::move(contour));
      continue;
    }
    auto above = [&](std::size_t i, std::size_t j) { return field.value(i, j) >= level; };
    auto vertex = [&](const EdgeKey& e) {
      const std::size_t i2 = e.dir == 0 ? e.i + 1 : e.i;
      const std::size_t j2 = e.dir == 1 ? e.j + 1 : e.j;
      const double v1 = field.value(e.i, e.j), v2 = field.value(i2, j2);
      const double t = (level - v1) / (v2 - v1);
      const double p1 = field.p1_values[e.i] + t * (field.p1_values[i2] - field.p1_values[e.i]);
      const double p2 = field.p2_values[e.j] + t * (field.p2_values[j2] - field.p2_values[e.j]);
      return ParamPoint{p1, p2};
    };

    std::vector<Segment> segments;
    for (std::size_t i = 0; i + 1 < rows; ++i) {
      for (std::size_t j = 0; j + 1 < cols; ++j) {
        const bool c00 = above(i, j), c10 = above(i + 1, j);
        const bool c11 = above(i + 1, j + 1), c01 = above(i, j + 1);
        // bottom, right, top, left
        const std::array<EdgeKey, 4> edges{EdgeKey{i, j, 0}, EdgeKey{i + 1, j, 1},
                                           EdgeKey{i, j + 1, 0}, EdgeKey{i, j, 1}};
        const std::array<bool, 4> crosses{c00 != c10, c10 != c11, c01 != c11, c00 != c01};
        const int n = static_cast<int>(std::count(crosses.begin(), crosses.end(), true));
        if (n == 2) {
          std::array<EdgeKey, 2> pair{};
          int k = 0;
          for (int e = 0; e < 4; ++e) {
            if (crosses[e]) pair[k++] = edges[e];
          }
          segments.push_back({pair[0], pair[1]});
        } else if (n == 4) {
          const double centre = 0.25 * (field.value(i, j) + field.value(i + 1, j) +
                                        field.value(i + 1, j + 1) + field.value(i, j + 1));
          if ((centre >= level) == c00) {
            // Corners 10 and 01 are isolated.
            segments.push_back({edges[0], edges[1]});
            segments.push_back({edges[2], edges[3]});
          } else {
            segments.push_back({edges[3], edges[0]});
            segments.push_back({edges[1], edges[2]});
          }
        }
      }
    }

    // Join segments sharing an edge vertex into polylines.
    std::map<EdgeKey, std::vector<std::size_t>> incident;
    for (std::size_t s = 0; s < segments.size(); ++s) {
      incident[segments[s].a].push_back(s);
      incident[segments[s].b].push_back(s);
    }
    std::vector<bool> used(segments.size(), false);
    auto walk = [&](std::size_t first, const EdgeKey& start) {
      std::vector<EdgeKey> chain{start};
      std::size_t s = first;
      EdgeKey at = start;
      while (true) {
        used[s] = true;
        const EdgeKey next = segments[s].a == at ? segments[s].b : segments[s].a;
        chain.push_back(next);
        at = next;
        std::optional<std::size_t> cont;
        for (std::size_t cand : incident[at]) {
          if (!used[cand]) {
            cont = cand;
            break;
          }
        }
        if (!cont) break;
        s = *cont;
      }
      Polyline line;
      line.reserve(chain.size());
      for (const auto& e : chain) line.push_back(vertex(e));
      contour.polylines.push_back(std::move(line));
    };
    // Open chains first (start at a vertex with one segment), then loops.
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (used[s]) continue;
      for (const EdgeKey& end : {segments[s].a, segments[s].b}) {
        if (!used[s] && incident[end].size() == 1) walk(s, end);
      }
    }
    for (std::size_t s = 0; s < segments.size(); ++s) {
      if (!used[s]) walk(s, segments[s].a);
    }
    out.contours.push_back(std::move(contour));
  }
  return out;
}

double interpolate(const EtaField& field, const ParamPoint& p) {
  const auto& xs = field.p1_values;
  const auto& ys = field.p2_values;
  if (xs.size() < 2 || ys.size() < 2) {
    throw Error(ErrorCode::InvalidArgument, "interpolation needs at least a 2 x 2 grid");
  }
  auto bracket = [](const std::vector<double>& v, double x) {
    const auto it = std::upper_bound(v.begin(), v.end(), x);
    std::size_t hi = static_cast<std::size_t>(std::distance(v.begin(), it));
    hi = std::clamp<std::size_t>(hi, 1, v.size() - 1);
    return hi - 1;
  };
  const std::size_t i = bracket(xs, p.p1), j = bracket(ys, p.p2);
  const double tx = (p.p1 - xs[i]) / (xs[i + 1] - xs[i]);
  const double ty = (p.p2 - ys[j]) / (ys[j + 1] - ys[j]);
  return (1 - tx) * (1 - ty) * field.value(i, j) + tx * (1 - ty) * field.value(i + 1, j) +
         tx * ty * field.value(i + 1, j + 1) + (1 - tx) * ty * field.value(i, j + 1);
}

double region_area(const EtaField& field, double level) {
  std::size_t valid = 0, inside = 0;
  for (const auto& cell : field.cells) {
    if (!cell.valid()) continue;
    ++valid;
    if (cell.eta >= level) ++inside;
  }
  return valid == 0 ? 0.0 : static_cast<double>(inside) / static_cast<double>(valid);
}

}  // namespace rdwkit
