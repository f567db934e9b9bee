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

#include "etalift/qweyl.hpp"

#include <cctype>
#include <functional>
#include <mutex>
#include <sstream>
#include <tuple>
#include <atomic>
#include <future>
#include <thread>
#include <cstdlib>

#include "etalift/descent.hpp"
#include "etalift/galois.hpp"

namespace etalift {

// ---------------------------------------------------------------------------
// free model
// ---------------------------------------------------------------------------

namespace {

using FreeTerms = std::map<QWeylElem::Key, CycInt>;

void add_free(FreeTerms& t, const QWeylElem::Key& k, const CycInt& c) {
    if (c.is_zero()) return;
    auto it = t.find(k);
    if (it == t.end()) {
        t.emplace(k, c);
    } else {
        it->second = it->second + c;
        if (it->second.is_zero()) t.erase(it);
    }
}

// x^b y^c on the y-before-x basis: T[b][c] built from
// x^b y = rho^b y x^b + delta_b x^{b-1}
const FreeTerms& xy_expansion(PrimeP p, uint32_t b, uint32_t c) {
    static std::map<std::tuple<int, uint32_t, uint32_t>, FreeTerms> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    std::function<const FreeTerms&(uint32_t, uint32_t)> go =
        [&](uint32_t bb, uint32_t cc) -> const FreeTerms& {
        auto key = std::make_tuple(p.get(), bb, cc);
        auto it = cache.find(key);
        if (it != cache.end()) return it->second;
        FreeTerms t;
        if (bb == 0) {
            t.emplace(QWeylElem::Key{cc, 0}, CycInt::from_int(p, 1));
        } else if (cc == 0) {
            t.emplace(QWeylElem::Key{0, bb}, CycInt::from_int(p, 1));
        } else {
            // x^b y^c = rho^b y (x^b y^{c-1}) + delta_b (x^{b-1} y^{c-1})
            const FreeTerms rec1 = go(bb, cc - 1);
            const FreeTerms rec2 = go(bb - 1, cc - 1);
            CycInt rb = CycInt::rho_pow(p, bb);
            CycInt db = CycInt::delta(p, bb);
            for (const auto& [k, v] : rec1)
                add_free(t, {k.first + 1, k.second}, v * rb);
            for (const auto& [k, v] : rec2) add_free(t, k, v * db);
        }
        return cache.emplace(key, std::move(t)).first->second;
    };
    return go(b, c);
}

}  // namespace

QWeylElem::QWeylElem(PrimeP p, std::map<Key, CycInt> terms) : p_(p), terms_(std::move(terms)) {
    for (auto it = terms_.begin(); it != terms_.end();)
        it = it->second.is_zero() ? terms_.erase(it) : std::next(it);
}

QWeylElem QWeylElem::one(PrimeP p) { return monomial(p, 0, 0, CycInt::from_int(p, 1)); }
QWeylElem QWeylElem::gen_x(PrimeP p) { return monomial(p, 0, 1, CycInt::from_int(p, 1)); }
QWeylElem QWeylElem::gen_y(PrimeP p) { return monomial(p, 1, 0, CycInt::from_int(p, 1)); }

QWeylElem QWeylElem::monomial(PrimeP p, uint32_t i, uint32_t j, const CycInt& c) {
    QWeylElem e(p);
    if (!c.is_zero()) e.terms_.emplace(Key{i, j}, c);
    return e;
}

QWeylElem QWeylElem::operator+(const QWeylElem& o) const {
    QWeylElem r = *this;
    for (const auto& [k, c] : o.terms_) add_free(r.terms_, k, c);
    return r;
}

QWeylElem QWeylElem::operator-(const QWeylElem& o) const {
    QWeylElem r = *this;
    for (const auto& [k, c] : o.terms_) add_free(r.terms_, k, -c);
    return r;
}

QWeylElem QWeylElem::operator*(const QWeylElem& o) const {
    QWeylElem r(p_);
    for (const auto& [ka, ca] : terms_)
        for (const auto& [kb, cb] : o.terms_) {
            // (y^a x^b)(y^c x^d) = y^a (x^b y^c) x^d
            const FreeTerms& mid = xy_expansion(p_, ka.second, kb.first);
            CycInt coeff = ca * cb;
            for (const auto& [km, cm] : mid)
                add_free(r.terms_, {ka.first + km.first, km.second + kb.second},
                         coeff * cm);
        }
    return r;
}

QWeylElem QWeylElem::operator*(const CycInt& c) const {
    QWeylElem r(p_);
    for (const auto& [k, v] : terms_) add_free(r.terms_, k, v * c);
    return r;
}

bool QWeylElem::operator==(const QWeylElem& o) const {
    return p_ == o.p_ && terms_ == o.terms_;
}

std::string QWeylElem::to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        if (!first) os << " + ";
        first = false;
        const auto& [k, c] = *it;
        bool has_var = k.first > 0 || k.second > 0;
        if (!has_var) {
            os << "(" << c.to_string() << ")";
            continue;
        }
        if (!c.is_one()) os << "(" << c.to_string() << ")*";
        if (k.first > 0) {
            os << "y";
            if (k.first > 1) os << "^" << k.first;
        }
        if (k.second > 0) {
            if (k.first > 0) os << "*";
            os << "x";
            if (k.second > 1) os << "^" << k.second;
        }
    }
    return os.str();
}

QWeylElem qweyl_word(PrimeP p, const std::string& word) {
    QWeylElem r = QWeylElem::one(p);
    for (char ch : word) {
        if (ch == 'x')
            r = r * QWeylElem::gen_x(p);
        else if (ch == 'y')
            r = r * QWeylElem::gen_y(p);
        else if (!std::isspace((unsigned char)ch))
            throw ArgumentError("word must consist of 'x' and 'y'");
    }
    return r;
}

// ---------------------------------------------------------------------------
// center
// ---------------------------------------------------------------------------

CenterReport verify_center(PrimeP p) {
    const int pv = p.get();
    CenterReport rep;
    QWeylElem X = QWeylElem::gen_x(p), Y = QWeylElem::gen_y(p);
    QWeylElem XP = QWeylElem::monomial(p, 0, (uint32_t)pv, CycInt::from_int(p, 1));
    QWeylElem YP = QWeylElem::monomial(p, (uint32_t)pv, 0, CycInt::from_int(p, 1));
    rep.xp_central = ((XP * Y - Y * XP).is_zero()) && ((XP * X - X * XP).is_zero());
    rep.yp_central = ((YP * X - X * YP).is_zero()) && ((YP * Y - Y * YP).is_zero());

    // x^i y = rho^i y x^i + delta_i x^{i-1} for 0 <= i <= 2p
    rep.commutation_closed_form = true;
    for (int i = 0; i <= 2 * pv; ++i) {
        QWeylElem lhs = QWeylElem::monomial(p, 0, (uint32_t)i, CycInt::from_int(p, 1)) * Y;
        QWeylElem rhs =
            QWeylElem::monomial(p, 1, (uint32_t)i, CycInt::rho_pow(p, i));
        if (i >= 1)
            rhs = rhs + QWeylElem::monomial(p, 0, (uint32_t)(i - 1), CycInt::delta(p, i));
        if (!(lhs == rhs)) rep.commutation_closed_form = false;
    }

    // independence of y^i x^j over C = Z[rho][x^p, y^p] up to degree 2 in s, t:
    // central multiples hit pairwise distinct free monomials with coefficient 1
    rep.monomials_independent = true;
    std::map<QWeylElem::Key, int> seen;
    for (int i = 0; i < pv; ++i)
        for (int j = 0; j < pv; ++j)
            for (int dt = 0; dt < 2; ++dt)
                for (int ds = 0; ds < 2; ++ds) {
                    QWeylElem prod =
                        QWeylElem::monomial(p, (uint32_t)(pv * dt), 0,
                                            CycInt::from_int(p, 1)) *
                        QWeylElem::monomial(p, (uint32_t)i, (uint32_t)j,
                                            CycInt::from_int(p, 1)) *
                        QWeylElem::monomial(p, 0, (uint32_t)(pv * ds),
                                            CycInt::from_int(p, 1));
                    if (prod.terms().size() != 1 ||
                        !prod.terms().begin()->second.is_one()) {
                        rep.monomials_independent = false;
                        continue;
                    }
                    ++seen[prod.terms().begin()->first];
                }
    for (const auto& [k, n] : seen)
        if (n != 1) rep.monomials_independent = false;
    return rep;
}

// ---------------------------------------------------------------------------
// bounded model
// ---------------------------------------------------------------------------

QWeylBounded::QWeylBounded(PrimeP p, CtxPtr coeff, RingElem s_val, RingElem t_val)
    : p_(p), coeff_(std::move(coeff)), s_(std::move(s_val)), t_(std::move(t_val)) {
    if (s_.ctx() != coeff_ || t_.ctx() != coeff_)
        throw StructuralError("central values must live in the coefficient ring");
}

QWeylBounded::Elem QWeylBounded::unit(const RingElem& c) const {
    Elem e;
    if (!c.is_zero()) e.emplace(Key{0, 0}, c);
    return e;
}

QWeylBounded::Elem QWeylBounded::basis(uint32_t i, uint32_t j, const RingElem& c) const {
    if (i >= (uint32_t)p_.get() || j >= (uint32_t)p_.get())
        throw ArgumentError("basis exponents must be below p");
    Elem e;
    if (!c.is_zero()) e.emplace(Key{i, j}, c);
    return e;
}

QWeylBounded::Elem QWeylBounded::add(const Elem& a, const Elem& b) const {
    Elem r = a;
    for (const auto& [k, c] : b) {
        auto it = r.find(k);
        if (it == r.end()) {
            r.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.erase(it);
        }
    }
    return r;
}

QWeylBounded::Elem QWeylBounded::mul(const Elem& a, const Elem& b) const {
    const uint32_t pv = (uint32_t)p_.get();
    Elem r;
    auto acc = [&](const Key& k, const RingElem& c) {
        if (c.is_zero()) return;
        auto it = r.find(k);
        if (it == r.end()) {
            r.emplace(k, c);
        } else {
            it->second = it->second + c;
            if (it->second.is_zero()) r.erase(it);
        }
    };
    for (const auto& [ka, ca] : a)
        for (const auto& [kb, cb] : b) {
            const auto& mid = xy_expansion(p_, ka.second, kb.first);
            RingElem coeff = ca * cb;
            for (const auto& [km, cm] : mid) {
                uint32_t yi = ka.first + km.first;
                uint32_t xj = km.second + kb.second;
                RingElem c = coeff * cm;
                while (yi >= pv) {
                    yi -= pv;
                    c = c * t_;
                }
                while (xj >= pv) {
                    xj -= pv;
                    c = c * s_;
                }
                acc({yi, xj}, c);
            }
        }
    return r;
}

bool QWeylBounded::eq(const Elem& a, const Elem& b) const {
    if (a.size() != b.size()) return false;
    auto ia = a.begin();
    auto ib = b.begin();
    for (; ia != a.end(); ++ia, ++ib)
        if (ia->first != ib->first || !(ia->second == ib->second)) return false;
    return true;
}

ElemMat QWeylBounded::psi_matrix() const {
    const uint32_t pv = (uint32_t)p_.get();
    const size_t n = (size_t)pv * pv;        // rank of B over C
    const size_t dim = n * n;                // rank of both sides of psi
    ElemMat M(dim, std::vector<RingElem>(dim, coeff_->zero()));
    auto idx = [&](uint32_t i, uint32_t j) { return (size_t)i * pv + j; };
    for (uint32_t ai = 0; ai < pv; ++ai)
        for (uint32_t aj = 0; aj < pv; ++aj)
            for (uint32_t bi = 0; bi < pv; ++bi)
                for (uint32_t bj = 0; bj < pv; ++bj) {
                    size_t col = idx(ai, aj) * n + idx(bi, bj);
                    Elem A = basis(ai, aj, coeff_->one());
                    Elem B = basis(bi, bj, coeff_->one());
                    for (uint32_t zi = 0; zi < pv; ++zi)
                        for (uint32_t zj = 0; zj < pv; ++zj) {
                            Elem Z = basis(zi, zj, coeff_->one());
                            Elem out = mul(mul(A, Z), B);
                            for (const auto& [k, c] : out) {
                                size_t row = idx(zi, zj) * n + idx(k.first, k.second);
                                M[row][col] = M[row][col] + c;
                            }
                        }
                }
    return M;
}

// ---------------------------------------------------------------------------
// symbolic determinant (p = 2)
// ---------------------------------------------------------------------------

AzumayaSymbolic azumaya_det_symbolic(PrimeP p) {
    const int pv = p.get();
    if (pv != 2)
        throw ArgumentError(
            "symbolic determinant exceeds the size cap for p > 2; use evaluated mode");
    auto C = RingCtx::make(CoeffRing(p), {"s", "t"});
    QWeylBounded B(p, C, C->var("s"), C->var("t"));
    ElemMat M = B.psi_matrix();
    AzumayaSymbolic out{C->zero(), 0, CycInt(p), false, "", false, false};
    out.det = det_bareiss(M);

    // factor as unit * pi^k for pi = 1 + s t eta^p, falling back to the
    // center-coordinate flip 1 + rho^{p(p-1)/2} s t eta^p
    CycInt twist = CycInt::rho_pow(p, (long)pv * (pv - 1) / 2);
    struct PiCand {
        const char* name;
        bool twisted;
        RingElem pi;
    };
    RingElem st_etap = C->var("s") * C->var("t") * C->eta().pow(pv);
    std::vector<PiCand> cands{
        {"1 + s t eta^p", false, C->one() + st_etap},
        {"1 + rho^{p(p-1)/2} s t eta^p", true, C->one() + st_etap * twist},
    };
    for (const auto& cand : cands) {
        RingElem rem = out.det;
        int k = 0;
        while (true) {
            auto q = exact_divide(rem, cand.pi);
            if (!q) break;
            rem = *q;
            ++k;
        }
        auto c = rem.as_constant();
        if (k > 0 && c && cyc_invert(*c)) {
            out.power = k;
            out.unit = *c;
            out.factored = true;
            out.pi_form = cand.name;
            out.twisted = cand.twisted;
            break;
        }
    }
    // (det, p) = C: modulo p the constant coefficient is a unit and every
    // other coefficient is nilpotent (divisible by eta)
    CoeffRing modp = CoeffRing::quotient(p, pv, 0);
    CoeffRing modeta = CoeffRing::quotient(p, 0, 1);
    bool ok = true;
    bool have_const = false;
    for (const auto& [m, c2] : out.det.terms()) {
        bool constant = std::all_of(m.begin(), m.end(), [](uint32_t e) { return e == 0; });
        CycInt cm = modp.reduce(c2);
        if (constant) {
            have_const = !modeta.reduce(cm).is_zero();
        } else if (!modp.reduce(cm).is_zero() && !modeta.reduce(cm).is_zero()) {
            ok = false;
        }
    }
    out.mod_p_unit = ok && have_const;
    return out;
}

// ---------------------------------------------------------------------------
// point sweeps over residue fields
// ---------------------------------------------------------------------------

namespace {

unsigned thread_budget() {
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    if (const char* env = std::getenv("ETALIFT_THREADS")) {
        long cap = std::atol(env);
        if (cap >= 1) hw = (unsigned)cap;
    }
    return hw;
}

// determinant of a matrix of residue-field scalars, mod q
mpz_class det_mod_q(std::vector<std::vector<mpz_class>> m, const mpz_class& q) {
    const size_t n = m.size();
    mpz_class det = 1;
    for (size_t k = 0; k < n; ++k) {
        size_t sel = k;
        while (sel < n && m[sel][k] % q == 0) ++sel;
        if (sel == n) return 0;
        if (sel != k) {
            std::swap(m[k], m[sel]);
            det = -det;
        }
        mpz_class inv;
        if (mpz_invert(inv.get_mpz_t(), m[k][k].get_mpz_t(), q.get_mpz_t()) == 0)
            throw InternalCheckError("pivot not invertible mod q");
        det = (det * m[k][k]) % q;
        for (size_t i = k + 1; i < n; ++i) {
            if (m[i][k] % q == 0) continue;
            mpz_class f = (m[i][k] * inv) % q;
            for (size_t j = k; j < n; ++j) m[i][j] = ((m[i][j] - f * m[k][j]) % q + q) % q;
        }
    }
    return (det % q + q) % q;
}

// residue-field value of a canonical representative: evaluate at rho = r0
mpz_class scalar_of(const RingElem& e, const mpz_class& q, const mpz_class& r0) {
    auto c = e.as_constant();
    if (!c) throw StructuralError("expected a residue-field scalar");
    mpz_class v = 0, pw = 1;
    for (int i = 0; i < e.ctx()->prime().phi(); ++i) {
        v = (v + c->coeff(i) * pw) % q;
        pw = (pw * r0) % q;
    }
    return (v % q + q) % q;
}

}  // namespace

AzumayaPointSweep azumaya_point_sweep(PrimeP p, int q, const mpz_class& rho_image) {
    AzumayaPointSweep out;
    out.q = q;
    out.rho_image = rho_image;
    CoeffRing base = CoeffRing::residue_field(p, q, rho_image);
    CtxPtr F = RingCtx::make(base, {});
    const int pv = p.get();
    RingElem etap = F->eta().pow(pv);
    CycInt twist = CycInt::rho_pow(p, (long)pv * (pv - 1) / 2);

    struct PointResult {
        bool det_unit = false;
        bool pi_plain = false;
        bool pi_twisted = false;
    };
    const size_t npoints = (size_t)q * q;
    std::vector<PointResult> results(npoints);
    auto run_point = [&](size_t idx) {
        int s0 = (int)(idx / q), t0 = (int)(idx % q);
        RingElem sv = F->from_int(s0), tv = F->from_int(t0);
        QWeylBounded B(p, F, sv, tv);
        ElemMat M = B.psi_matrix();
        std::vector<std::vector<mpz_class>> Mi(M.size());
        for (size_t i = 0; i < M.size(); ++i)
            for (size_t j = 0; j < M.size(); ++j)
                Mi[i].push_back(scalar_of(M[i][j], q, rho_image));
        PointResult r;
        r.det_unit = det_mod_q(std::move(Mi), q) != 0;
        r.pi_plain = !(F->one() + sv * tv * etap).is_zero();
        r.pi_twisted = !(F->one() + sv * tv * etap * twist).is_zero();
        return r;
    };

    unsigned threads = thread_budget();
    if (threads <= 1 || npoints < 8) {
        for (size_t i = 0; i < npoints; ++i) results[i] = run_point(i);
    } else {
        std::vector<std::future<void>> jobs;
        std::atomic<size_t> next{0};
        for (unsigned t = 0; t < threads; ++t)
            jobs.push_back(std::async(std::launch::async, [&] {
                for (size_t i = next.fetch_add(1); i < npoints; i = next.fetch_add(1))
                    results[i] = run_point(i);
            }));
        for (auto& jfut : jobs) jfut.get();
    }

    out.matches_plain = true;
    out.matches_twisted = true;
    size_t first_singular = npoints;
    for (size_t i = 0; i < npoints; ++i) {
        const PointResult& r = results[i];
        ++out.points_checked;
        if (r.det_unit) ++out.azumaya_points;
        if (r.det_unit != r.pi_plain) {
            out.matches_plain = false;
            if (out.failure.empty())
                out.failure = "plain-form mismatch at (s,t) = (" +
                              std::to_string(i / q) + "," + std::to_string(i % q) + ")";
        }
        if (r.det_unit != r.pi_twisted) out.matches_twisted = false;
        if (!r.det_unit && first_singular == npoints) first_singular = i;
    }

    if (first_singular < npoints) {
        // nilpotence of the two-sided ideal generated by 1 + eta x y at the
        // first singular point
        int s0 = (int)(first_singular / q), t0 = (int)(first_singular % q);
        RingElem sv = F->from_int(s0), tv = F->from_int(t0);
        QWeylBounded B(p, F, sv, tv);
        QWeylBounded::Elem w = B.add(
            B.unit(F->one()), B.mul(B.basis(0, 1, F->eta()), B.basis(1, 0, F->one())));
        const size_t n = (size_t)pv * pv;
        auto to_vec = [&](const QWeylBounded::Elem& e) {
            std::vector<mpz_class> v(n, mpz_class(0));
            for (const auto& [k, c] : e)
                v[(size_t)k.first * pv + k.second] = scalar_of(c, q, rho_image);
            return v;
        };
        auto from_idx = [&](size_t i) {
            return B.basis((uint32_t)(i / pv), (uint32_t)(i % pv), F->one());
        };
        std::vector<QWeylBounded::Elem> gens;
        for (size_t ai = 0; ai < n; ++ai)
            for (size_t bi = 0; bi < n; ++bi)
                gens.push_back(B.mul(B.mul(from_idx(ai), w), from_idx(bi)));
        auto reduce_basis = [&](std::vector<QWeylBounded::Elem>& v) {
            std::vector<std::vector<mpz_class>> rows;
            for (auto& g : v) rows.push_back(to_vec(g));
            size_t rank = 0;
            for (size_t col = 0; col < n && rank < rows.size(); ++col) {
                size_t sel = rows.size();
                for (size_t i = rank; i < rows.size(); ++i)
                    if (rows[i][col] % q != 0) {
                        sel = i;
                        break;
                    }
                if (sel == rows.size()) continue;
                std::swap(rows[rank], rows[sel]);
                std::swap(v[rank], v[sel]);
                mpz_class inv;
                mpz_invert(inv.get_mpz_t(), rows[rank][col].get_mpz_t(),
                           mpz_class(q).get_mpz_t());
                for (size_t i = 0; i < rows.size(); ++i) {
                    if (i == rank || rows[i][col] % q == 0) continue;
                    mpz_class f = (rows[i][col] * inv) % q;
                    for (size_t j = 0; j < n; ++j)
                        rows[i][j] = ((rows[i][j] - f * rows[rank][j]) % q + q) % q;
                }
                ++rank;
            }
            v.resize(rank);
        };
        reduce_basis(gens);
        std::vector<QWeylBounded::Elem> power = gens;
        bool nilpotent = false;
        for (int iter = 0; iter < 2 * pv * pv && !nilpotent; ++iter) {
            std::vector<QWeylBounded::Elem> next;
            for (const auto& u : power)
                for (const auto& v2 : gens) next.push_back(B.mul(u, v2));
            reduce_basis(next);
            if (next.empty()) {
                nilpotent = true;
            } else if (next.size() == power.size()) {
                break;  // I^{k+1} = I^k nonzero: stabilized, not nilpotent
            }
            power = std::move(next);
        }
        out.nilpotent_witness = nilpotent;
    }

    out.locus_matches = out.matches_plain || out.matches_twisted;
    out.pi_form = out.matches_plain ? "1 + s t eta^p"
                 : out.matches_twisted ? "1 + rho^{p(p-1)/2} s t eta^p"
                                       : "no form matched";
    return out;
}

AzumayaPoint azumaya_point(PrimeP p, int q, const mpz_class& rho_image, int s0, int t0) {
    CoeffRing base = CoeffRing::residue_field(p, q, rho_image);
    CtxPtr F = RingCtx::make(base, {});
    const int pv = p.get();
    RingElem etap = F->eta().pow(pv);
    CycInt twist = CycInt::rho_pow(p, (long)pv * (pv - 1) / 2);
    RingElem sv = F->from_int(s0), tv = F->from_int(t0);
    QWeylBounded B(p, F, sv, tv);
    ElemMat M = B.psi_matrix();
    std::vector<std::vector<mpz_class>> Mi(M.size());
    for (size_t i = 0; i < M.size(); ++i)
        for (size_t j = 0; j < M.size(); ++j)
            Mi[i].push_back(scalar_of(M[i][j], q, rho_image));
    AzumayaPoint out;
    out.det_unit = det_mod_q(std::move(Mi), q) != 0;
    out.pi_plain = !(F->one() + sv * tv * etap).is_zero();
    out.pi_twisted = !(F->one() + sv * tv * etap * twist).is_zero();
    return out;
}

mpz_class default_rho_image(PrimeP p, int q) {
    for (int r0 = 0; r0 < q; ++r0) {
        mpz_class phi = 0, pw = 1;
        for (int i = 0; i < p.get(); ++i) {
            phi += pw;
            pw = (pw * r0) % q;
        }
        if (phi % q == 0) return r0;
    }
    throw ArgumentError("no rho image mod q; need q = 1 (mod p) or q = p");
}

// ---------------------------------------------------------------------------
// cyclic specialization and differential crossed products
// ---------------------------------------------------------------------------

CyclicSpecialization specialize_cyclic(PrimeP p, const RingElem& u, const RingElem& b) {
    if (u.ctx() != b.ctx()) throw StructuralError("u and b must share a ring");
    auto binv = try_invert(b);
    if (!binv) throw UnitRequiredError("specialize_cyclic needs b invertible");
    const CtxPtr& K = u.ctx();
    RingElem c = u * *binv;  // gamma^p = u/b
    QWeylBounded A(p, K, b, c);
    CyclicSpecialization out;
    // beta gamma - rho gamma beta = 1 with beta = x, gamma = y
    QWeylBounded::Elem X = A.basis(0, 1, K->one());
    QWeylBounded::Elem Y = A.basis(1, 0, K->one());
    QWeylBounded::Elem lhs =
        A.add(A.mul(X, Y), A.mul(A.mul(Y, X), A.unit(-K->rho())));
    out.relation = A.eq(lhs, A.unit(K->one()));
    // phi(x^p) = b and phi(y^p) = u/b via the bounded fold
    QWeylBounded::Elem xp = X;
    QWeylBounded::Elem yp = Y;
    for (int i = 1; i < p.get(); ++i) {
        xp = A.mul(xp, X);
        yp = A.mul(yp, Y);
    }
    out.xp_image = A.eq(xp, A.unit(b));
    out.yp_image = A.eq(yp, A.unit(c));
    return out;
}

namespace {

// invertibility of a matrix over a local coefficient ring via the residue
// field F_p (base modulo eta, nilpotent variables to zero)
std::optional<bool> invertible_via_local_residue(const ElemMat& m) {
    CtxPtr ctx = m[0][0].ctx();
    PrimeP p = ctx->prime();
    // the base must be local with residue field F_p: some power of p lies in
    // the ideal, and eta generates the maximal ideal
    {
        bool p_power = false;
        CycInt pw = CycInt::from_int(p, p.get());
        for (int k = 1; k <= 4 * p.phi() && !p_power; ++k) {
            if (ctx->base().ideal_contains(pw)) p_power = true;
            pw = pw * mpz_class(p.get());
        }
        if (!p_power) return std::nullopt;
    }
    // variables must be nilpotent for the residue map var -> 0
    for (const auto& r : ctx->rules())
        if (!r.rhs.empty()) return std::nullopt;
    for (size_t v = 0; v < ctx->nvars(); ++v)
        if (!ctx->rule_for(v)) return std::nullopt;
    try {
        auto Fp = RingCtx::make(CoeffRing::quotient(p, 0, 1), {});
        std::vector<RingElem> zeros(ctx->nvars(), Fp->zero());
        RingHom red = RingHom::make(ctx, Fp, 1, zeros, true);
        ElemMat down(m.size());
        for (size_t i = 0; i < m.size(); ++i)
            for (size_t j = 0; j < m.size(); ++j) down[i].push_back(red.apply(m[i][j]));
        auto d = det_gauss_units(down);
        if (!d) return std::nullopt;
        return !d->is_zero();
    } catch (const Error&) {
        return std::nullopt;
    }
}

}  // namespace

DiffCrossedCert diff_crossed_product_check(const CtxPtr& ctx, const RingElem& c,
                                           const RingElem& b) {
    PrimeP p = ctx->prime();
    if (!ctx->from_int(p.get()).is_zero())
        throw ArgumentError("differential crossed products need pR = 0");
    QWeylBounded A(p, ctx, b, c);
    ElemMat M = A.psi_matrix();
    DiffCrossedCert out;
    auto d = det_gauss_units(M);
    if (d) {
        out.azumaya = try_invert(*d).has_value();
        out.method = "unit-pivot-det";
        return out;
    }
    auto viares = invertible_via_local_residue(M);
    if (viares) {
        out.azumaya = *viares;
        out.method = "residue-det";
        return out;
    }
    RingElem dl = det_lift(M);
    out.azumaya = try_invert(dl).has_value();
    out.method = "lift-det";
    return out;
}

// ---------------------------------------------------------------------------
// Brauer lift demo
// ---------------------------------------------------------------------------

BrauerLiftCert brauer_lift_demo(const CtxPtr& R, const RingHom& reduction,
                                const RingElem& c_dn, const RingElem& b_dn) {
    PrimeP p = R->prime();
    const int pv = p.get();
    if (reduction.source() != R) throw StructuralError("reduction must start at R");
    BrauerLiftCert out;

    // hypothesis: every element of 1 + pR is a unit (exhaustive at desk scale)
    {
        out.hypothesis_units = true;
        ModuleBasis mb = module_basis(R);
        std::vector<CycInt> box = enumerate_coeff_ring(R->base(), 5000);
        // walk w over the ring via the monomial odometer
        std::vector<size_t> idx(mb.monos.size(), 0);
        size_t guard = 0;
        while (true) {
            TermMap t;
            for (size_t mi = 0; mi < mb.monos.size(); ++mi)
                if (!box[idx[mi]].is_zero()) t.emplace(mb.monos[mi], box[idx[mi]]);
            RingElem w = R->from_terms(std::move(t));
            if (!try_invert(R->one() + w * mpz_class(pv)).has_value()) {
                out.hypothesis_units = false;
                break;
            }
            if (++guard > 100000) break;
            size_t mi = mb.monos.size();
            bool done = true;
            while (mi-- > 0) {
                if (++idx[mi] < box.size()) {
                    done = false;
                    break;
                }
                idx[mi] = 0;
            }
            if (done) break;
        }
    }

    // canonical lifts and the lifted algebra
    RingElem c_up = canonical_preimage(reduction, c_dn);
    RingElem b_up = canonical_preimage(reduction, b_dn);
    QWeylBounded Aup(p, R, b_up, c_up);
    ElemMat M = Aup.psi_matrix();
    {
        auto viares = invertible_via_local_residue(M);
        if (viares) {
            out.lift_azumaya = *viares;
        } else {
            auto d = det_gauss_units(M);
            if (d) {
                out.lift_azumaya = try_invert(*d).has_value();
            } else {
                out.lift_azumaya = try_invert(det_lift(M)).has_value();
            }
        }
    }

    // structure constants reduce onto [c'', b'']
    {
        const CtxPtr& Rdn = reduction.target();
        QWeylBounded Adn(p, Rdn, b_dn, c_dn);
        const uint32_t pu = (uint32_t)pv;
        bool ok = true;
        for (uint32_t i1 = 0; i1 < pu && ok; ++i1)
            for (uint32_t j1 = 0; j1 < pu && ok; ++j1)
                for (uint32_t i2 = 0; i2 < pu && ok; ++i2)
                    for (uint32_t j2 = 0; j2 < pu && ok; ++j2) {
                        auto up = Aup.mul(Aup.basis(i1, j1, R->one()),
                                          Aup.basis(i2, j2, R->one()));
                        QWeylBounded::Elem down;
                        for (const auto& [k, c] : up) {
                            RingElem rc = reduction.apply(c);
                            if (!rc.is_zero()) down.emplace(k, rc);
                        }
                        auto expect = Adn.mul(Adn.basis(i1, j1, Rdn->one()),
                                              Adn.basis(i2, j2, Rdn->one()));
                        ok = Adn.eq(down, expect);
                    }
        out.reduction_matches = ok;
    }
    return out;
}

}  // namespace etalift
