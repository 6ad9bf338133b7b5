#include "reduction.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace mpsm::detail {

BoundaryTable BoundaryTable::build(const FilteredComplex& complex) {
  BoundaryTable t;
  const std::size_t m = complex.size();
  std::unordered_map<Simplex, std::uint32_t, SimplexHash> index;
  index.reserve(m);
  for (std::size_t i = 0; i < m; ++i) index.emplace(complex.simplex(i), static_cast<std::uint32_t>(i));

  t.dims.resize(m);
  t.offsets.assign(m + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& s = complex.simplex(i);
    t.dims[i] = s.dimension();
    if (s.dimension() > 0) {
      for (std::size_t j = 0; j < s.size(); ++j) {
        auto it = index.find(s.facet(j));
        if (it == index.end())
          throw std::invalid_argument("complex is not closed under faces: " + s.to_string());
        t.faces.push_back(it->second);
      }
    }
    t.offsets[i + 1] = static_cast<std::uint32_t>(t.faces.size());
  }

  std::vector<std::uint32_t> order(m);
  std::iota(order.begin(), order.end(), 0u);
  std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
    if (t.dims[a] != t.dims[b]) return t.dims[a] < t.dims[b];
    return complex.simplex(a) < complex.simplex(b);
  });
  t.lex_rank.resize(m);
  for (std::size_t r = 0; r < m; ++r) t.lex_rank[order[r]] = static_cast<std::uint32_t>(r);
  return t;
}

Reducer::Reducer(std::uint32_t p) : p_(p) {
  if (p_ < 2) throw std::invalid_argument("field characteristic must be at least 2");
  if (p_ <= (1u << 16)) {
    inverse_table_.assign(p_, 0);
    for (std::uint32_t a = 1; a < p_; ++a) {
      // Fermat: a^(p-2)
      std::uint64_t r = 1, b = a, e = p_ - 2;
      while (e) {
        if (e & 1) r = r * b % p_;
        b = b * b % p_;
        e >>= 1;
      }
      inverse_table_[a] = static_cast<std::uint32_t>(r);
    }
  }
}

std::uint32_t Reducer::inverse(std::uint32_t a) const {
  if (!inverse_table_.empty()) return inverse_table_[a];
  std::uint64_t r = 1, b = a, e = p_ - 2;
  while (e) {
    if (e & 1) r = r * b % p_;
    b = b * b % p_;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

// target += factor * source, both sorted by row.
void Reducer::add_scaled(Column& target, const Column& source, std::uint32_t factor) {
  scratch_.clear();
  scratch_.reserve(target.size() + source.size());
  auto a = target.cbegin();
  auto b = source.cbegin();
  while (a != target.end() || b != source.end()) {
    if (b == source.end() || (a != target.end() && a->row < b->row)) {
      scratch_.push_back(*a++);
    } else if (a == target.end() || b->row < a->row) {
      scratch_.push_back({b->row, static_cast<std::uint32_t>(std::uint64_t(b->coeff) * factor % p_)});
      ++b;
    } else {
      const auto c = static_cast<std::uint32_t>((a->coeff + std::uint64_t(b->coeff) * factor) % p_);
      if (c != 0) scratch_.push_back({a->row, c});
      ++a;
      ++b;
    }
  }
  target.swap(scratch_);
}

void Reducer::run(const BoundaryTable& table, std::span<const std::uint32_t> order, int min_degree,
                  int max_degree) {
  const std::size_t m = order.size();
  if (position_of_.size() < table.dims.size()) position_of_.assign(table.dims.size(), -1);
  killer_.assign(m, -1);
  positive_.assign(m, 0);
  pivot_owner_.assign(m, -1);
  if (reduced_.size() < m) reduced_.resize(m);

  int top = -1;
  for (std::size_t i = 0; i < m; ++i) {
    position_of_[order[i]] = static_cast<std::int32_t>(i);
    top = std::max(top, table.dims[order[i]]);
    if (table.dims[order[i]] == 0) positive_[i] = 1;
  }

  const int highest = std::min(top, max_degree + 1);
  const int lowest = std::max(min_degree, 1);
  for (int dim = highest; dim >= lowest; --dim) {
    for (std::size_t j = 0; j < m; ++j) {
      const auto g = order[j];
      if (table.dims[g] != dim) continue;
      if (killer_[j] >= 0) {  // cleared: its column reduces to zero
        positive_[j] = 1;
        continue;
      }
      work_.clear();
      const auto facets = table.facets(g);
      for (std::size_t f = 0; f < facets.size(); ++f) {
        const auto pos = position_of_[facets[f]];
        work_.push_back({static_cast<std::uint32_t>(pos), (f % 2 == 0) ? 1u : p_ - 1});
      }
      std::sort(work_.begin(), work_.end(), [](const Entry& a, const Entry& b) { return a.row < b.row; });
      while (!work_.empty()) {
        const auto owner = pivot_owner_[work_.back().row];
        if (owner < 0) break;
        const Column& other = reduced_[owner];
        const std::uint64_t factor =
            (p_ - std::uint64_t(work_.back().coeff) * inverse(other.back().coeff) % p_) % p_;
        add_scaled(work_, other, static_cast<std::uint32_t>(factor));
      }
      if (work_.empty()) {
        positive_[j] = 1;
      } else {
        const auto low = work_.back().row;
        pivot_owner_[low] = static_cast<std::int32_t>(j);
        killer_[low] = static_cast<std::int32_t>(j);
        reduced_[j].assign(work_.begin(), work_.end());
      }
    }
  }

  for (std::size_t i = 0; i < m; ++i) {
    position_of_[order[i]] = -1;
    reduced_[i].clear();
  }
}

}  // namespace mpsm::detail
