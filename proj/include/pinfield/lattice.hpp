#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace pinfield {

/// Raised for malformed inputs (bad dimensions, mismatched lengths, invalid parameters).
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A finite subset of Z^d with its nearest-neighbour structure.
///
/// Sites are kept sorted lexicographically by coordinate; that order is the
/// canonical index used by every vector and matrix in the library. Heights are
/// pinned to zero outside the volume, so each missing neighbour contributes a
/// boundary edge.
class Volume {
 public:
  struct BoundaryEdge {
    std::size_t site;
    std::vector<int> outside;
  };

  /// Centered box [-L, L]^d with (2L+1)^d sites.
  static Volume box(int d, int L);
  /// Arbitrary finite site set; duplicates are rejected.
  static Volume from_sites(int d, std::vector<std::vector<int>> sites);

  int dimension() const { return d_; }
  std::size_t size() const { return n_; }
  std::span<const int> site(std::size_t i) const {
    return {coords_.data() + i * static_cast<std::size_t>(d_), static_cast<std::size_t>(d_)};
  }

  const std::vector<std::pair<std::size_t, std::size_t>>& internal_edges() const {
    return internal_edges_;
  }
  std::vector<BoundaryEdge> boundary_edges() const;
  std::size_t boundary_edge_count() const { return boundary_count_; }

  /// Indices of the in-volume nearest neighbours of site i.
  std::span<const std::size_t> neighbors(std::size_t i) const {
    return {adjacency_.data() + offsets_[i], offsets_[i + 1] - offsets_[i]};
  }
  /// Number of neighbours of site i lying outside the volume.
  int boundary_degree(std::size_t i) const {
    return 2 * d_ - static_cast<int>(offsets_[i + 1] - offsets_[i]);
  }

  std::optional<std::size_t> index_of(std::span<const int> point) const;

  /// L when the volume was built by box(d, L).
  std::optional<int> box_radius() const { return box_radius_; }
  /// Site closest to the origin (the origin itself for boxes).
  std::size_t center_index() const;

 private:
  Volume() = default;
  void build_adjacency();

  int d_ = 0;
  std::size_t n_ = 0;
  std::vector<int> coords_;
  std::vector<std::size_t> offsets_;
  std::vector<std::size_t> adjacency_;
  std::vector<std::pair<std::size_t, std::size_t>> internal_edges_;
  std::size_t boundary_count_ = 0;
  std::optional<int> box_radius_;
};

}  // namespace pinfield
