#include "pinfield/lattice.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>

namespace pinfield {

namespace {

// Eigen's sparse storage index is int; keep every volume addressable by it.
constexpr std::size_t kMaxSites = static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max());

bool lex_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

}  // namespace

Volume Volume::box(int d, int L) {
  if (d <= 0) throw InvalidArgument("make_box: dimension must be positive");
  if (L < 0) throw InvalidArgument("make_box: L must be nonnegative");
  const std::size_t side = 2 * static_cast<std::size_t>(L) + 1;
  std::size_t count = 1;
  for (int a = 0; a < d; ++a) {
    if (count > kMaxSites / side) throw InvalidArgument("make_box: site count overflows the index range");
    count *= side;
  }

  Volume v;
  v.d_ = d;
  v.n_ = count;
  v.box_radius_ = L;
  v.coords_.resize(count * static_cast<std::size_t>(d));
  // Odometer over [-L, L]^d with the last coordinate fastest: lexicographic order.
  std::vector<int> x(static_cast<std::size_t>(d), -L);
  for (std::size_t i = 0; i < count; ++i) {
    std::copy(x.begin(), x.end(), v.coords_.begin() + static_cast<std::ptrdiff_t>(i * d));
    for (int a = d - 1; a >= 0; --a) {
      if (++x[static_cast<std::size_t>(a)] <= L) break;
      x[static_cast<std::size_t>(a)] = -L;
    }
  }
  v.build_adjacency();
  return v;
}

Volume Volume::from_sites(int d, std::vector<std::vector<int>> sites) {
  if (d <= 0) throw InvalidArgument("volume: dimension must be positive");
  if (sites.empty()) throw InvalidArgument("volume: at least one site is required");
  if (sites.size() > kMaxSites) throw InvalidArgument("volume: site count overflows the index range");
  for (const auto& s : sites) {
    if (s.size() != static_cast<std::size_t>(d)) throw InvalidArgument("volume: site has wrong dimension");
  }
  std::sort(sites.begin(), sites.end());
  if (std::adjacent_find(sites.begin(), sites.end()) != sites.end()) {
    throw InvalidArgument("volume: duplicate site");
  }
  Volume v;
  v.d_ = d;
  v.n_ = sites.size();
  v.coords_.reserve(v.n_ * static_cast<std::size_t>(d));
  for (const auto& s : sites) v.coords_.insert(v.coords_.end(), s.begin(), s.end());
  v.build_adjacency();
  return v;
}

std::optional<std::size_t> Volume::index_of(std::span<const int> point) const {
  if (point.size() != static_cast<std::size_t>(d_)) return std::nullopt;
  std::size_t lo = 0;
  std::size_t hi = n_;
  while (lo < hi) {
    const std::size_t mid = lo + (hi - lo) / 2;
    if (lex_less(site(mid), point)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < n_ && std::equal(point.begin(), point.end(), site(lo).begin())) return lo;
  return std::nullopt;
}

void Volume::build_adjacency() {
  offsets_.assign(n_ + 1, 0);
  adjacency_.clear();
  adjacency_.reserve(n_ * 2 * static_cast<std::size_t>(d_));
  internal_edges_.clear();
  boundary_count_ = 0;
  std::vector<int> probe(static_cast<std::size_t>(d_));
  for (std::size_t i = 0; i < n_; ++i) {
    const auto x = site(i);
    for (int a = 0; a < d_; ++a) {
      for (int step : {-1, 1}) {
        std::copy(x.begin(), x.end(), probe.begin());
        probe[static_cast<std::size_t>(a)] += step;
        if (auto j = index_of(probe)) {
          adjacency_.push_back(*j);
          if (i < *j) internal_edges_.emplace_back(i, *j);
        } else {
          ++boundary_count_;
        }
      }
    }
    offsets_[i + 1] = adjacency_.size();
  }
}

std::vector<Volume::BoundaryEdge> Volume::boundary_edges() const {
  std::vector<BoundaryEdge> edges;
  edges.reserve(boundary_count_);
  std::vector<int> probe(static_cast<std::size_t>(d_));
  for (std::size_t i = 0; i < n_; ++i) {
    const auto x = site(i);
    for (int a = 0; a < d_; ++a) {
      for (int step : {-1, 1}) {
        std::copy(x.begin(), x.end(), probe.begin());
        probe[static_cast<std::size_t>(a)] += step;
        if (!index_of(probe)) edges.push_back({i, probe});
      }
    }
  }
  return edges;
}

std::size_t Volume::center_index() const {
  std::size_t best = 0;
  long best_norm = std::numeric_limits<long>::max();
  for (std::size_t i = 0; i < n_; ++i) {
    long norm = 0;
    for (int c : site(i)) norm += static_cast<long>(c) * c;
    if (norm < best_norm) {
      best_norm = norm;
      best = i;
    }
  }
  return best;
}

}  // namespace pinfield
