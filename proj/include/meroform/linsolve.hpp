#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "rational.hpp"

namespace meroform {

// Sparse exact row: integer entries sorted by column, plus an integer
// right-hand side. Rows are kept content-reduced (gcd of all entries
// divided out) to control coefficient growth.
struct SparseRow {
    std::vector<std::pair<std::int32_t, Integer>> lhs;
    Integer rhs;

    bool empty_lhs() const { return lhs.empty(); }
    std::int32_t lead_col() const { return lhs.front().first; }
    const Integer& lead_val() const { return lhs.front().second; }
};

namespace detail {

inline void content_reduce(SparseRow& r)
{
    Integer g = boost::multiprecision::abs(r.rhs);
    for (const auto& [c, v] : r.lhs) {
        g = boost::multiprecision::gcd(g, v);
        if (g == 1)
            return;
    }
    if (g <= 1)
        return;
    for (auto& [c, v] : r.lhs)
        v /= g;
    r.rhs /= g;
}

// row := a*row - b*pivot, which zeroes row's entry at pivot's lead column
// when a = pivot lead value and b = row's value there.
inline SparseRow combine(const SparseRow& row, const SparseRow& pivot, const Integer& a,
                         const Integer& b)
{
    SparseRow out;
    out.lhs.reserve(row.lhs.size() + pivot.lhs.size());
    auto it = row.lhs.begin(), jt = pivot.lhs.begin();
    while (it != row.lhs.end() || jt != pivot.lhs.end()) {
        if (jt == pivot.lhs.end() || (it != row.lhs.end() && it->first < jt->first)) {
            out.lhs.emplace_back(it->first, a * it->second);
            ++it;
        } else if (it == row.lhs.end() || jt->first < it->first) {
            out.lhs.emplace_back(jt->first, -b * jt->second);
            ++jt;
        } else {
            Integer v = a * it->second - b * jt->second;
            if (v != 0)
                out.lhs.emplace_back(it->first, std::move(v));
            ++it;
            ++jt;
        }
    }
    out.rhs = a * row.rhs - b * pivot.rhs;
    content_reduce(out);
    return out;
}

} // namespace detail

// Fraction-free sparse Gaussian elimination over Q. Columns are processed
// left to right; among the rows competing for a pivot position the one with
// the smallest-bit-size pivot entry wins (ties broken by sparsity). Row
// updates are integer cross-multiplications with content division, so no
// rounding and no uncontrolled blowup.
class SparseLinearSolver {
public:
    explicit SparseLinearSolver(int ncols) : ncols_(ncols), pivot_of_col_(ncols, -1) {}

    // Entries: (column, rational coefficient); duplicates are accumulated.
    void add_row(std::vector<std::pair<int, Rational>> entries, const Rational& rhs)
    {
        std::sort(entries.begin(), entries.end(),
                  [](const auto& x, const auto& y) { return x.first < y.first; });
        // accumulate duplicates, scale to integers by the lcm of denominators
        std::vector<std::pair<int, Rational>> merged;
        for (auto& e : entries) {
            if (e.second == 0)
                continue;
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
                if (merged.back().second == 0)
                    merged.pop_back();
            } else {
                merged.push_back(std::move(e));
            }
        }
        Integer scale(1);
        for (const auto& [c, v] : merged)
            scale = boost::multiprecision::lcm(scale, denominator_of(v));
        scale = boost::multiprecision::lcm(scale, denominator_of(rhs));
        SparseRow row;
        row.lhs.reserve(merged.size());
        for (const auto& [c, v] : merged)
            row.lhs.emplace_back(c, numerator_of(v) * (scale / denominator_of(v)));
        row.rhs = numerator_of(rhs) * (scale / denominator_of(rhs));
        detail::content_reduce(row);
        if (row.empty_lhs() && row.rhs == 0)
            return;
        ++equations_;
        queue_.push_back(std::move(row));
    }

    int equations() const { return equations_; }
    int columns() const { return ncols_; }

    // Runs the elimination. Returns false when some row reduces to
    // 0 = nonzero.
    bool eliminate()
    {
        std::vector<std::vector<SparseRow>> buckets(ncols_);
        for (auto& r : queue_) {
            if (r.empty_lhs()) {
                if (r.rhs != 0)
                    consistent_ = false;
                continue;
            }
            buckets[r.lead_col()].push_back(std::move(r));
        }
        queue_.clear();
        for (int c = 0; c < ncols_; ++c) {
            auto rows = std::move(buckets[c]);
            buckets[c].clear();
            if (rows.empty())
                continue;
            std::size_t best = 0;
            for (std::size_t i = 1; i < rows.size(); ++i) {
                auto key = [](const SparseRow& r) {
                    return std::make_pair(bit_size(r.lead_val()), r.lhs.size());
                };
                if (key(rows[i]) < key(rows[best]))
                    best = i;
            }
            SparseRow pivot = std::move(rows[best]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == best)
                    continue;
                SparseRow next =
                    detail::combine(rows[i], pivot, pivot.lead_val(), rows[i].lead_val());
                if (next.empty_lhs()) {
                    if (next.rhs != 0)
                        consistent_ = false;
                    continue;
                }
                buckets[next.lead_col()].push_back(std::move(next));
            }
            pivot_of_col_[c] = static_cast<int>(pivots_.size());
            pivots_.push_back(std::move(pivot));
        }
        eliminated_ = true;
        return consistent_;
    }

    bool consistent() const { return consistent_; }
    int rank() const { return static_cast<int>(pivots_.size()); }
    bool is_pivot_col(int c) const { return pivot_of_col_[c] >= 0; }

    // Particular solution with every free column set to zero. Only valid on
    // consistent, eliminated systems.
    std::vector<Rational> solution() const
    {
        std::vector<Rational> val(ncols_, Rational(0));
        for (int c = ncols_ - 1; c >= 0; --c) {
            int pr = pivot_of_col_[c];
            if (pr < 0)
                continue;
            const SparseRow& row = pivots_[pr];
            Rational acc(row.rhs);
            for (std::size_t t = 1; t < row.lhs.size(); ++t)
                acc -= Rational(row.lhs[t].second) * val[row.lhs[t].first];
            val[c] = acc / Rational(row.lead_val());
        }
        return val;
    }

    // True iff x[col] takes the same value on every solution, decided by
    // probing whether the system plus the extra equation x[col] = value + 1
    // is inconsistent.
    bool is_value_unique(int col, const Rational& value) const
    {
        SparseRow probe;
        Rational bumped = value + 1;
        probe.lhs.emplace_back(col, denominator_of(bumped));
        probe.rhs = numerator_of(bumped);
        while (!probe.empty_lhs()) {
            int c = probe.lead_col();
            int pr = pivot_of_col_[c];
            if (pr < 0)
                return false; // a free column absorbs the probe
            probe = detail::combine(probe, pivots_[pr], pivots_[pr].lead_val(),
                                    probe.lead_val());
        }
        return probe.rhs != 0;
    }

private:
    int ncols_;
    int equations_ = 0;
    bool consistent_ = true;
    bool eliminated_ = false;
    std::vector<SparseRow> queue_;
    std::vector<SparseRow> pivots_;
    std::vector<int> pivot_of_col_;
};

} // namespace meroform
