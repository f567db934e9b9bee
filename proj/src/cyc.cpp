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

#include "etalift/cyc.hpp"

#include <algorithm>
#include <sstream>

namespace etalift {

PrimeP::PrimeP(int p, int cap) : p_(p) {
    if (p < 2 || !is_prime(p))
        throw ArgumentError("p = " + std::to_string(p) + " is not prime");
    if (p > cap)
        throw ArgumentError("p = " + std::to_string(p) + " exceeds the cap " +
                            std::to_string(cap));
}

bool PrimeP::is_prime(int n) {
    if (n < 2) return false;
    for (int d = 2; (long)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

bool PrimeP::is_primitive_root(long s, int p) {
    if (p == 2) return s % 2 == 1;
    long r = ((s % p) + p) % p;
    if (r == 0) return false;
    long acc = 1;
    for (int k = 1; k < p - 1; ++k) {
        acc = (acc * r) % p;
        if (acc == 1) return false;
    }
    return (acc * r) % p == 1;
}

CycInt::CycInt(PrimeP p) : p_(p), c_(p.phi(), mpz_class(0)) {}

CycInt::CycInt(PrimeP p, std::vector<mpz_class> coeffs) : p_(p), c_(std::move(coeffs)) {
    if ((int)c_.size() != p.phi())
        throw StructuralError("CycInt coefficient vector must have length p-1");
}

CycInt CycInt::from_int(PrimeP p, const mpz_class& n) {
    CycInt r(p);
    r.c_[0] = n;
    return r;
}

CycInt CycInt::rho_pow(PrimeP p, long k) {
    long e = ((k % p.get()) + p.get()) % p.get();
    CycInt r(p);
    if (e <= p.get() - 2) {
        r.c_[e] = 1;
    } else {
        // rho^{p-1} = -(1 + rho + ... + rho^{p-2})
        for (auto& ci : r.c_) ci = -1;
    }
    return r;
}

CycInt CycInt::eta(PrimeP p) {
    CycInt r = rho_pow(p, 1);
    r.c_[0] -= 1;
    return r;
}

CycInt CycInt::delta(PrimeP p, long s) {
    long e = ((s % p.get()) + p.get()) % p.get();
    CycInt r(p);
    for (long i = 0; i < e; ++i) r.c_[i] = 1;  // e <= p-1, indices <= p-2
    return r;
}

bool CycInt::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const mpz_class& v) { return v == 0; });
}

bool CycInt::is_one() const {
    if (c_[0] != 1) return false;
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

bool CycInt::is_rational() const {
    for (size_t i = 1; i < c_.size(); ++i)
        if (c_[i] != 0) return false;
    return true;
}

void CycInt::check_same(const CycInt& o) const {
    if (p_ != o.p_) throw StructuralError("CycInt operands have different p");
}

CycInt CycInt::operator+(const CycInt& o) const {
    check_same(o);
    CycInt r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] + o.c_[i];
    return r;
}

CycInt CycInt::operator-(const CycInt& o) const {
    check_same(o);
    CycInt r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] - o.c_[i];
    return r;
}

CycInt CycInt::operator-() const {
    CycInt r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = -c_[i];
    return r;
}

CycInt CycInt::operator*(const CycInt& o) const {
    check_same(o);
    const int n = p_.phi();
    // raw convolution up to degree 2n-2, then eliminate indices >= n from the
    // top down with rho^m = -sum_{j=0}^{n-1} rho^{m-n+j}  (m >= n).
    std::vector<mpz_class> w(2 * n - 1, mpz_class(0));
    for (int i = 0; i < n; ++i) {
        if (c_[i] == 0) continue;
        for (int j = 0; j < n; ++j) {
            if (o.c_[j] == 0) continue;
            w[i + j] += c_[i] * o.c_[j];
        }
    }
    for (int m = 2 * n - 2; m >= n; --m) {
        if (w[m] == 0) continue;
        for (int j = 0; j < n; ++j) w[m - n + j] -= w[m];
        w[m] = 0;
    }
    CycInt r(p_);
    for (int i = 0; i < n; ++i) r.c_[i] = w[i];
    return r;
}

CycInt CycInt::operator*(const mpz_class& s) const {
    CycInt r(p_);
    for (size_t i = 0; i < c_.size(); ++i) r.c_[i] = c_[i] * s;
    return r;
}

CycInt CycInt::pow(unsigned long e) const {
    CycInt acc = from_int(p_, 1);
    CycInt base = *this;
    while (e > 0) {
        if (e & 1) acc = acc * base;
        base = base * base;
        e >>= 1;
    }
    return acc;
}

bool CycInt::operator==(const CycInt& o) const {
    return p_ == o.p_ && c_ == o.c_;
}

bool CycInt::operator<(const CycInt& o) const {
    if (p_.get() != o.p_.get()) return p_.get() < o.p_.get();
    for (size_t i = 0; i < c_.size(); ++i) {
        int cmp = mpz_cmp(c_[i].get_mpz_t(), o.c_[i].get_mpz_t());
        if (cmp != 0) return cmp < 0;
    }
    return false;
}

CycInt CycInt::subst_rho_pow(long s) const {
    CycInt r(p_);
    for (int k = 0; k < p_.phi(); ++k) {
        if (c_[k] == 0) continue;
        long e = ((long)k * s) % p_.get();
        if (e < 0) e += p_.get();
        if (e <= p_.get() - 2) {
            r.c_[e] += c_[k];
        } else {
            for (auto& ci : r.c_) ci -= c_[k];
        }
    }
    return r;
}

std::string CycInt::to_string() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == 0) continue;
        mpz_class a = c_[i];
        if (!first) {
            os << (a < 0 ? " - " : " + ");
            if (a < 0) a = -a;
        }
        first = false;
        bool unit_coeff = (a == 1 || a == -1);
        if (i == 0) {
            os << a.get_str();
        } else {
            if (a == -1)
                os << "-";
            else if (a != 1)
                os << a.get_str() << "*";
            (void)unit_coeff;
            os << "rho";
            if (i > 1) os << "^" << i;
        }
    }
    return os.str();
}

CycInt tau_on_cyc(const CycInt& a, long s) {
    if (!PrimeP::is_primitive_root(s, a.prime().get()))
        throw ArgumentError("tau requires s to generate (Z/pZ)^*");
    return a.subst_rho_pow(s);
}

namespace {

// Exact rational Gaussian elimination on the (p-1)x(p-1) system M*x = b.
std::optional<std::vector<mpq_class>> solve_rational(std::vector<std::vector<mpq_class>> m,
                                                     std::vector<mpq_class> b) {
    const size_t n = b.size();
    std::vector<size_t> piv(n);
    for (size_t col = 0, row = 0; col < n && row < n; ++col, ++row) {
        size_t sel = row;
        while (sel < n && m[sel][col] == 0) ++sel;
        if (sel == n) return std::nullopt;  // singular
        std::swap(m[sel], m[row]);
        std::swap(b[sel], b[row]);
        for (size_t r = 0; r < n; ++r) {
            if (r == row || m[r][col] == 0) continue;
            mpq_class f = m[r][col] / m[row][col];
            for (size_t c = col; c < n; ++c) m[r][c] -= f * m[row][c];
            b[r] -= f * b[row];
        }
        piv[row] = col;
    }
    std::vector<mpq_class> x(n);
    for (size_t r = 0; r < n; ++r) x[piv[r]] = b[r] / m[r][piv[r]];
    return x;
}

}  // namespace

std::optional<CycInt> cyc_solve(const CycInt& a, const CycInt& b) {
    if (a.prime() != b.prime()) throw StructuralError("cyc_solve: mismatched p");
    const int n = a.prime().phi();
    if (a.is_zero()) return b.is_zero() ? std::optional<CycInt>(CycInt(a.prime())) : std::nullopt;
    // columns: a * rho^j on the power basis
    std::vector<std::vector<mpq_class>> m(n, std::vector<mpq_class>(n));
    for (int j = 0; j < n; ++j) {
        CycInt col = a * CycInt::rho_pow(a.prime(), j);
        for (int i = 0; i < n; ++i) m[i][j] = col.coeff(i);
    }
    std::vector<mpq_class> rhs(n);
    for (int i = 0; i < n; ++i) rhs[i] = b.coeff(i);
    auto sol = solve_rational(std::move(m), std::move(rhs));
    if (!sol) return std::nullopt;
    std::vector<mpz_class> xc(n);
    for (int i = 0; i < n; ++i) {
        if ((*sol)[i].get_den() != 1) return std::nullopt;  // not integral
        xc[i] = (*sol)[i].get_num();
    }
    return CycInt(a.prime(), std::move(xc));
}

std::optional<CycInt> cyc_invert(const CycInt& a) {
    return cyc_solve(a, CycInt::from_int(a.prime(), 1));
}

std::optional<CycInt> cyc_div_eta_pow(const CycInt& a, int k) {
    if (k < 0) throw ArgumentError("cyc_div_eta_pow: negative power");
    CycInt q = a;
    CycInt eta = CycInt::eta(a.prime());
    for (int i = 0; i < k; ++i) {
        auto r = cyc_solve(eta, q);
        if (!r) return std::nullopt;
        q = *r;
    }
    return q;
}

mpz_class binomial(unsigned long n, unsigned long k) {
    mpz_class r;
    mpz_bin_uiui(r.get_mpz_t(), n, k);
    return r;
}

EtaData EtaData::compute(PrimeP p) {
    CycInt eta = CycInt::eta(p);
    std::vector<mpz_class> b;
    for (int i = 1; i <= p.phi(); ++i) {
        mpz_class bin = binomial(p.get(), i);
        if (bin % p.get() != 0)
            throw InternalCheckError("binom(p,i) not divisible by p");
        b.push_back(bin / p.get());
    }
    CycInt y(p);
    for (int i = 1; i <= p.phi(); ++i) y = y + eta.pow(i - 1) * b[i - 1];

    CycInt minus_one = CycInt::from_int(p, -1);
    auto x = cyc_solve(y, minus_one);  // x*y = -1
    if (!x) throw InternalCheckError("y is not invertible; arithmetic bug");

    EtaData d{p, eta, std::move(b), y, *x};

    const mpz_class pz(p.get());
    CycInt eta_pm1 = eta.pow(p.get() - 1);
    if (!(eta_pm1 == -(y * pz)))
        throw InternalCheckError("eta^{p-1} = -p*y failed");
    if (!(d.x_unit * eta_pm1 == CycInt::from_int(p, pz)))
        throw InternalCheckError("p = x*eta^{p-1} failed");
    if (!(d.x_unit * y == minus_one))
        throw InternalCheckError("x*y = -1 failed");
    // x = -1 modulo eta: eta | x+1. y = 1 modulo eta likewise.
    if (!cyc_div_eta_pow(d.x_unit + CycInt::from_int(p, 1), 1))
        throw InternalCheckError("x = -1 mod eta failed");
    if (!cyc_div_eta_pow(y - CycInt::from_int(p, 1), 1))
        throw InternalCheckError("y = 1 mod eta failed");
    if (d.b[0] != 1) throw InternalCheckError("b_1 = 1 failed");
    return d;
}

}  // namespace etalift
