/*
   Copyright 2026 the etalift authors

   Licensed under the Apache License, Version 2.0 (the "License");
   you may not use this file except in compliance with the License.
   You may obtain a copy of the License at

        http://www.apache.org/licenses/LICENSE-2.0

   Unless required by applicable law or agreed to in writing, software
   distributed under the License is distributed on an "AS IS" BASIS,
   WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
   See the License for the specific language governing permissions and
   limitations under the License.
*/

#include "etalift/zlat.hpp"

#include <algorithm>

namespace etalift {

namespace {

bool is_zero_row(const ZVec& r) {
    return std::all_of(r.begin(), r.end(), [](const mpz_class& v) { return v == 0; });
}

// In-place HNF on rows; applies the same row operations to shadow (if given).
void hnf_inplace(ZMat& m, ZMat* shadow) {
    if (m.empty()) return;
    const size_t cols = m[0].size();
    size_t row = 0;
    for (size_t col = 0; col < cols && row < m.size(); ++col) {
        // gcd-eliminate the column below `row`
        for (size_t r = row + 1; r < m.size(); ++r) {
            while (m[r][col] != 0) {
                if (m[row][col] == 0) {
                    std::swap(m[row], m[r]);
                    if (shadow) std::swap((*shadow)[row], (*shadow)[r]);
                    continue;
                }
                mpz_class q = m[r][col] / m[row][col];  // truncated is fine here
                if (q != 0) {
                    for (size_t c = 0; c < cols; ++c) m[r][c] -= q * m[row][c];
                    if (shadow)
                        for (size_t c = 0; c < (*shadow)[r].size(); ++c)
                            (*shadow)[r][c] -= q * (*shadow)[row][c];
                }
                if (m[r][col] != 0) {
                    std::swap(m[row], m[r]);
                    if (shadow) std::swap((*shadow)[row], (*shadow)[r]);
                }
            }
        }
        if (m[row][col] == 0) continue;  // no pivot in this column
        if (m[row][col] < 0) {
            for (auto& v : m[row]) v = -v;
            if (shadow)
                for (auto& v : (*shadow)[row]) v = -v;
        }
        // reduce entries above the pivot into [0, pivot)
        for (size_t r = 0; r < row; ++r) {
            mpz_class q;
            mpz_fdiv_q(q.get_mpz_t(), m[r][col].get_mpz_t(), m[row][col].get_mpz_t());
            if (q != 0) {
                for (size_t c = 0; c < cols; ++c) m[r][c] -= q * m[row][c];
                if (shadow)
                    for (size_t c = 0; c < (*shadow)[r].size(); ++c)
                        (*shadow)[r][c] -= q * (*shadow)[row][c];
            }
        }
        ++row;
    }
    // drop zero rows (and their shadows)
    ZMat keep;
    ZMat keep_shadow;
    for (size_t r = 0; r < m.size(); ++r) {
        if (!is_zero_row(m[r])) {
            keep.push_back(std::move(m[r]));
            if (shadow) keep_shadow.push_back(std::move((*shadow)[r]));
        }
    }
    m = std::move(keep);
    if (shadow) *shadow = std::move(keep_shadow);
}

size_t pivot_col(const ZVec& row) {
    for (size_t c = 0; c < row.size(); ++c)
        if (row[c] != 0) return c;
    return row.size();
}

}  // namespace

ZMat hnf(ZMat rows) {
    hnf_inplace(rows, nullptr);
    return rows;
}

HnfT hnf_transform(const ZMat& rows) {
    ZMat m = rows;
    ZMat u(rows.size(), ZVec(rows.size(), mpz_class(0)));
    for (size_t i = 0; i < rows.size(); ++i) u[i][i] = 1;
    hnf_inplace(m, &u);
    return {std::move(m), std::move(u)};
}

ZVec lattice_reduce(const ZMat& h, ZVec v) {
    for (const auto& row : h) {
        size_t c = pivot_col(row);
        if (c == row.size()) continue;
        mpz_class q;
        mpz_fdiv_q(q.get_mpz_t(), v[c].get_mpz_t(), row[c].get_mpz_t());
        if (q != 0)
            for (size_t j = c; j < v.size(); ++j) v[j] -= q * row[j];
    }
    return v;
}

bool lattice_contains(const ZMat& h, const ZVec& v) {
    return is_zero_row(lattice_reduce(h, v));
}

bool lattice_subset(const ZMat& a, const ZMat& b_hnf) {
    return std::all_of(a.begin(), a.end(),
                       [&](const ZVec& r) { return lattice_contains(b_hnf, r); });
}

std::optional<ZVec> solve_in_span(const ZMat& rows, const ZVec& b) {
    if (rows.empty())
        return is_zero_row(b) ? std::optional<ZVec>(ZVec{}) : std::nullopt;
    HnfT t = hnf_transform(rows);
    ZVec v = b;
    ZVec comb(t.h.size(), mpz_class(0));
    for (size_t r = 0; r < t.h.size(); ++r) {
        size_t c = pivot_col(t.h[r]);
        if (c == t.h[r].size()) continue;
        if (v[c] % t.h[r][c] != 0) return std::nullopt;
        mpz_class q = v[c] / t.h[r][c];
        comb[r] = q;
        if (q != 0)
            for (size_t j = 0; j < v.size(); ++j) v[j] -= q * t.h[r][j];
    }
    if (!is_zero_row(v)) return std::nullopt;
    ZVec y(rows.size(), mpz_class(0));
    for (size_t r = 0; r < t.h.size(); ++r)
        for (size_t i = 0; i < rows.size(); ++i) y[i] += comb[r] * t.u[r][i];
    return y;
}

ZMat preimage_lattice(const ZMat& a, const ZMat& l, size_t n, size_t m) {
    // Rows of the block matrix: [a_i | e_i] for each row of a, [l_j | 0].
    ZMat block;
    for (size_t i = 0; i < n; ++i) {
        ZVec row(m + n, mpz_class(0));
        for (size_t c = 0; c < m; ++c) row[c] = a[i][c];
        row[m + i] = 1;
        block.push_back(std::move(row));
    }
    for (const auto& lr : l) {
        ZVec row(m + n, mpz_class(0));
        for (size_t c = 0; c < m; ++c) row[c] = lr[c];
        block.push_back(std::move(row));
    }
    ZMat h = hnf(std::move(block));
    ZMat kernel;
    for (const auto& row : h) {
        bool first_zero = true;
        for (size_t c = 0; c < m; ++c)
            if (row[c] != 0) {
                first_zero = false;
                break;
            }
        if (!first_zero) continue;
        ZVec x(row.begin() + m, row.end());
        if (!is_zero_row(x)) kernel.push_back(std::move(x));
    }
    return hnf(std::move(kernel));
}

std::optional<mpz_class> lattice_index(const ZMat& h, size_t n) {
    if (h.size() != n) return std::nullopt;
    mpz_class idx = 1;
    for (size_t r = 0; r < n; ++r) {
        size_t c = pivot_col(h[r]);
        if (c != r) return std::nullopt;  // not full-rank triangular
        idx *= h[r][r];
    }
    return idx;
}

}  // namespace etalift
