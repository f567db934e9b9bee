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

#include "etalift/linalg.hpp"

namespace etalift {

RingElem det_bareiss(ElemMat m) {
    if (m.empty()) throw StructuralError("determinant of an empty matrix");
    const size_t n = m.size();
    CtxPtr ctx = m[0][0].ctx();
    if (!ctx->base().is_exact())
        throw StructuralError("det_bareiss needs the exact base");
    RingElem prev = ctx->one();
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t sel = k + 1;
            while (sel < n && m[sel][k].is_zero()) ++sel;
            if (sel == n) return ctx->zero();
            std::swap(m[k], m[sel]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                RingElem num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                auto q = exact_divide(num, prev);
                if (!q) throw InternalCheckError("Bareiss division was not exact");
                m[i][j] = std::move(*q);
            }
        prev = m[k][k];
    }
    RingElem d = m[n - 1][n - 1];
    return sign < 0 ? -d : d;
}

CycInt det_bareiss_cyc(CycMat m, PrimeP p) {
    const size_t n = m.size();
    if (n == 0) throw StructuralError("determinant of an empty matrix");
    CycInt prev = CycInt::from_int(p, 1);
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (m[k][k].is_zero()) {
            size_t sel = k + 1;
            while (sel < n && m[sel][k].is_zero()) ++sel;
            if (sel == n) return CycInt(p);
            std::swap(m[k], m[sel]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                CycInt num = m[i][j] * m[k][k] - m[i][k] * m[k][j];
                auto q = cyc_solve(prev, num);
                if (!q) throw InternalCheckError("Bareiss division was not exact");
                m[i][j] = std::move(*q);
            }
        prev = m[k][k];
    }
    CycInt d = m[n - 1][n - 1];
    return sign < 0 ? -d : d;
}

std::optional<RingElem> det_gauss_units(ElemMat m) {
    if (m.empty()) throw StructuralError("determinant of an empty matrix");
    const size_t n = m.size();
    CtxPtr ctx = m[0][0].ctx();
    RingElem d = ctx->one();
    for (size_t k = 0; k < n; ++k) {
        size_t sel = n;
        std::optional<RingElem> pivinv;
        for (size_t i = k; i < n; ++i) {
            if (m[i][k].is_zero()) continue;
            try {
                auto inv = try_invert(m[i][k]);
                if (inv) {
                    sel = i;
                    pivinv = std::move(inv);
                    break;
                }
            } catch (const UndecidableError&) {
                return std::nullopt;
            }
        }
        if (sel == n) {
            bool all_zero = true;
            for (size_t i = k; i < n; ++i)
                if (!m[i][k].is_zero()) all_zero = false;
            if (all_zero) return ctx->zero();
            return std::nullopt;  // nonzero non-units only; cannot pivot
        }
        if (sel != k) {
            std::swap(m[k], m[sel]);
            d = -d;
        }
        d = d * m[k][k];
        for (size_t i = k + 1; i < n; ++i) {
            if (m[i][k].is_zero()) continue;
            RingElem f = m[i][k] * *pivinv;
            for (size_t j = k; j < n; ++j) m[i][j] = m[i][j] - f * m[k][j];
        }
    }
    return d;
}

RingElem det_lift(const ElemMat& m) {
    if (m.empty()) throw StructuralError("determinant of an empty matrix");
    CtxPtr ctx = m[0][0].ctx();
    // lift entries to the exact polynomial ring on the same variables
    auto lift = RingCtx::make(CoeffRing(ctx->prime()), ctx->vars());
    ElemMat lifted(m.size());
    for (size_t i = 0; i < m.size(); ++i)
        for (size_t j = 0; j < m.size(); ++j) {
            if (!m[i][j].is_polynomial())
                throw StructuralError("det_lift needs denominator-free entries");
            lifted[i].push_back(lift->from_terms(m[i][j].terms()));
        }
    RingElem d = det_bareiss(std::move(lifted));
    RingHom down = RingHom::canonical(lift, ctx);
    return down.apply(d);
}

RingElem det(const ElemMat& m) {
    if (m.empty()) throw StructuralError("determinant of an empty matrix");
    CtxPtr ctx = m[0][0].ctx();
    if (ctx->base().is_exact()) return det_bareiss(m);
    auto g = det_gauss_units(m);
    if (g) return *g;
    return det_lift(m);
}

size_t rank_field(ElemMat m) {
    if (m.empty()) return 0;
    const size_t rows = m.size();
    const size_t cols = m[0].size();
    size_t rank = 0;
    for (size_t col = 0; col < cols && rank < rows; ++col) {
        size_t sel = rows;
        std::optional<RingElem> pivinv;
        for (size_t i = rank; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            auto inv = try_invert(m[i][col]);
            if (inv) {
                sel = i;
                pivinv = std::move(inv);
                break;
            }
            throw StructuralError("rank_field: nonzero entry is not a unit");
        }
        if (sel == rows) continue;
        std::swap(m[rank], m[sel]);
        for (size_t i = rank + 1; i < rows; ++i) {
            if (m[i][col].is_zero()) continue;
            RingElem f = m[i][col] * *pivinv;
            for (size_t j = col; j < cols; ++j) m[i][j] = m[i][j] - f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

}  // namespace etalift
