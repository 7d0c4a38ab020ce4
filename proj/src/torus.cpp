#include "powerwalk/torus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace powerwalk {

char direction_symbol(Direction d) noexcept {
  switch (d) {
    case Direction::right: return 'R';
    case Direction::left: return 'L';
    case Direction::up: return 'U';
    case Direction::down: return 'D';
  }
  return '?';
}

TorusGrid::TorusGrid(int side) : side_(side) {
  if (side < 2) throw std::invalid_argument("torus side must be at least 2");
}

Vertex TorusGrid::wrap(std::int64_t x, std::int64_t y) const noexcept {
  auto reduce = [this](std::int64_t c) {
    std::int64_t r = c % side_;
    return static_cast<int>(r < 0 ? r + side_ : r);
  };
  return {reduce(x), reduce(y)};
}

Vertex TorusGrid::neighbor(Vertex v, Direction d) const noexcept {
  switch (d) {
    case Direction::right: return wrap(v.x + 1, v.y);
    case Direction::left: return wrap(v.x - 1, v.y);
    case Direction::up: return wrap(v.x, v.y + 1);
    case Direction::down: return wrap(v.x, v.y - 1);
  }
  return v;
}

DirectedPort apply_rotation(const TorusGrid& grid, const DirectedPort& port) {
  return {grid.neighbor(port.vertex, port.label), reversed(port.label)};
}

PathPort apply_powered_rotation(const TorusGrid& grid, const PathPort& port) {
  PathPort out;
  out.vertex = port.vertex;
  out.labels.reserve(port.labels.size());
  for (Direction g : port.labels) {
    const DirectedPort step = apply_rotation(grid, {out.vertex, g});
    out.vertex = step.vertex;
    out.labels.push_back(step.label);
  }
  std::reverse(out.labels.begin(), out.labels.end());
  return out;
}

std::int64_t label_space_size(int t) {
  if (t < 0 || t > 30) throw std::invalid_argument("walk length out of range");
  return std::int64_t{1} << (2 * t);
}

std::int64_t encode_labels(std::span<const Direction> labels) {
  std::int64_t code = 0;
  for (Direction g : labels) code = code * kDegree + static_cast<std::int64_t>(g);
  return code;
}

std::vector<Direction> decode_labels(std::int64_t code, int t) {
  std::vector<Direction> labels(static_cast<std::size_t>(t));
  for (int i = t - 1; i >= 0; --i) {
    labels[static_cast<std::size_t>(i)] = static_cast<Direction>(code % kDegree);
    code /= kDegree;
  }
  return labels;
}

std::int64_t powered_rotation_index(const TorusGrid& grid, int t, std::int64_t basis_index) {
  const std::int64_t coin_dim = label_space_size(t);
  const PathPort in{grid.vertex(basis_index / coin_dim), decode_labels(basis_index % coin_dim, t)};
  const PathPort out = apply_powered_rotation(grid, in);
  return grid.index(out.vertex) * coin_dim + encode_labels(out.labels);
}

double adjacency_eigenvalue(const TorusGrid& grid, Mode k) {
  const double L = grid.side();
  return 0.5 * (std::cos(2.0 * std::numbers::pi * k.kx / L) +
                std::cos(2.0 * std::numbers::pi * k.ky / L));
}

double adjacency_gap(const TorusGrid& grid, Mode k) {
  // 1 - (cos a + cos b)/2 = sin^2(a/2) + sin^2(b/2)
  const double L = grid.side();
  const double sx = std::sin(std::numbers::pi * k.kx / L);
  const double sy = std::sin(std::numbers::pi * k.ky / L);
  return sx * sx + sy * sy;
}

double powered_gap(const TorusGrid& grid, Mode k, int t) {
  if (t < 1) throw std::invalid_argument("walk length must be positive");
  const double g = adjacency_gap(grid, k);
  if (g < 1.0) return -std::expm1(t * std::log1p(-g));
  return 1.0 - std::pow(1.0 - g, t);
}

AdjacencySpectrum adjacency_spectrum(const TorusGrid& grid) {
  AdjacencySpectrum eig;
  eig.modes.reserve(static_cast<std::size_t>(grid.vertex_count()));
  for (std::int64_t i = 0; i < grid.vertex_count(); ++i) {
    const Mode k = grid.mode(i);
    const double c = adjacency_eigenvalue(grid, k);
    eig.modes.push_back({k, c, -adjacency_gap(grid, k)});
  }
  return eig;
}

double adjacency_power_entry(const TorusGrid& grid, int t, Vertex u, Vertex v,
                             std::int64_t budget) {
  if (t < 1) throw std::invalid_argument("adjacency_power_entry: t must be >= 1");
  if (!grid.contains(u) || !grid.contains(v))
    throw std::invalid_argument("adjacency_power_entry: vertex outside grid");
  if (t > 15 || label_space_size(t) > budget)
    throw BudgetExceeded("adjacency_power_entry: 4^" + std::to_string(t) +
                         " paths exceed enumeration budget " + std::to_string(budget));
  const std::int64_t paths = label_space_size(t);
  std::int64_t hits = 0;
  for (std::int64_t code = 0; code < paths; ++code) {
    Vertex w = u;
    std::int64_t rest = code;
    for (int i = 0; i < t; ++i) {
      w = grid.neighbor(w, static_cast<Direction>(rest % kDegree));
      rest /= kDegree;
    }
    if (w == v) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(paths);
}

Eigen::MatrixXd adjacency_matrix(const TorusGrid& grid) {
  const auto n = grid.vertex_count();
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (std::int64_t i = 0; i < n; ++i) {
    const Vertex u = grid.vertex(i);
    for (int d = 0; d < kDegree; ++d)
      a(i, grid.index(grid.neighbor(u, static_cast<Direction>(d)))) += 1.0 / kDegree;
  }
  return a;
}

}  // namespace powerwalk
