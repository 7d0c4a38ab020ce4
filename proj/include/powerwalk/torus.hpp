#pragma once

// Periodic two-dimensional grid as a 4-regular graph: rotation map, powered
// rotation map over label sequences, and the Fourier spectrum of the
// normalized adjacency matrix.

#include <array>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace powerwalk {

/// Raised when a brute-force routine would exceed its configured size budget.
class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Edge labels. Reversal pairs right/left and up/down.
enum class Direction : std::uint8_t { right = 0, left = 1, up = 2, down = 3 };

inline constexpr int kDegree = 4;

constexpr Direction reversed(Direction d) noexcept {
  return static_cast<Direction>(static_cast<std::uint8_t>(d) ^ 1u);
}

char direction_symbol(Direction d) noexcept;

struct Vertex {
  int x = 0;
  int y = 0;
  friend bool operator==(const Vertex&, const Vertex&) = default;
};

/// Fourier mode label (k_x, k_y), each in [0, L).
struct Mode {
  int kx = 0;
  int ky = 0;
  friend bool operator==(const Mode&, const Mode&) = default;
};

struct DirectedPort {
  Vertex vertex;
  Direction label = Direction::right;
  friend bool operator==(const DirectedPort&, const DirectedPort&) = default;
};

/// A vertex together with a length-t sequence of edge labels, i.e. an edge of
/// the t-th graph power.
struct PathPort {
  Vertex vertex;
  std::vector<Direction> labels;
  friend bool operator==(const PathPort&, const PathPort&) = default;
};

struct ModeEntry {
  Mode k;
  double cos_phi = 0.0;
  double laplacian_shift = 0.0;  // eigenvalue of A_G - I
};

struct AdjacencySpectrum {
  std::vector<ModeEntry> modes;  // row-major in (ky, kx)
};

class TorusGrid {
 public:
  explicit TorusGrid(int side);

  int side() const noexcept { return side_; }
  std::int64_t vertex_count() const noexcept {
    return static_cast<std::int64_t>(side_) * side_;
  }
  static constexpr int degree() noexcept { return kDegree; }
  bool bipartite() const noexcept { return side_ % 2 == 0; }

  Vertex wrap(std::int64_t x, std::int64_t y) const noexcept;
  bool contains(Vertex v) const noexcept {
    return v.x >= 0 && v.x < side_ && v.y >= 0 && v.y < side_;
  }
  std::int64_t index(Vertex v) const noexcept {
    return static_cast<std::int64_t>(v.y) * side_ + v.x;
  }
  Vertex vertex(std::int64_t index) const noexcept {
    return {static_cast<int>(index % side_), static_cast<int>(index / side_)};
  }
  std::int64_t mode_index(Mode k) const noexcept {
    return static_cast<std::int64_t>(k.ky) * side_ + k.kx;
  }
  Mode mode(std::int64_t index) const noexcept {
    return {static_cast<int>(index % side_), static_cast<int>(index / side_)};
  }
  Vertex neighbor(Vertex v, Direction d) const noexcept;

 private:
  int side_;
};

DirectedPort apply_rotation(const TorusGrid& grid, const DirectedPort& port);

/// Rotation map of the t-th power: follow the labels, collect each edge's label
/// as seen from its far end, and return them in reverse order.
PathPort apply_powered_rotation(const TorusGrid& grid, const PathPort& port);

/// Number of label sequences of length t.
std::int64_t label_space_size(int t);

/// Encodes labels base 4 with the first label most significant.
std::int64_t encode_labels(std::span<const Direction> labels);
std::vector<Direction> decode_labels(std::int64_t code, int t);

/// Powered rotation map on the flat index vertex * 4^t + label code.
std::int64_t powered_rotation_index(const TorusGrid& grid, int t, std::int64_t basis_index);

/// Eigenvalue cos(phi_k) of the normalized adjacency matrix for mode k.
double adjacency_eigenvalue(const TorusGrid& grid, Mode k);

/// 1 - cos(phi_k), evaluated without cancellation near k = 0.
double adjacency_gap(const TorusGrid& grid, Mode k);

/// 1 - cos^t(phi_k) with the same care.
double powered_gap(const TorusGrid& grid, Mode k, int t);

AdjacencySpectrum adjacency_spectrum(const TorusGrid& grid);

inline constexpr std::int64_t kDefaultPathBudget = 16384;  // 4^7

/// (A_G^t)_{uv} by enumerating every length-t label sequence from u. Test
/// oracle only; refuses when 4^t exceeds the budget.
double adjacency_power_entry(const TorusGrid& grid, int t, Vertex u, Vertex v,
                             std::int64_t budget = kDefaultPathBudget);

/// Dense normalized adjacency matrix, vertices in row-major order.
Eigen::MatrixXd adjacency_matrix(const TorusGrid& grid);

}  // namespace powerwalk
