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

#ifndef ETALIFT_CYC_HPP
#define ETALIFT_CYC_HPP

#include <gmpxx.h>

#include <optional>
#include <string>
#include <vector>

#include "etalift/errors.hpp"

namespace etalift {

/// The prime p, checked at construction. The library cap (default 13) keeps
/// p-th power expansions and determinant sizes at desk scale.
class PrimeP {
   public:
    static constexpr int kDefaultCap = 13;

    explicit PrimeP(int p, int cap = kDefaultCap);

    int get() const { return p_; }
    int phi() const { return p_ - 1; }  // rank of Z[rho] over Z

    bool operator==(const PrimeP& o) const { return p_ == o.p_; }
    bool operator!=(const PrimeP& o) const { return p_ != o.p_; }

    static bool is_prime(int n);
    static bool is_primitive_root(long s, int p);

   private:
    int p_;
};

/// An element of Z[rho] = Z[X]/(X^{p-1}+...+1), stored on the free basis
/// 1, rho, ..., rho^{p-2}. The reduction rho^{p-1} = -(1+rho+...+rho^{p-2})
/// is applied eagerly, so representation is unique and equality is a
/// coefficient comparison.
class CycInt {
   public:
    explicit CycInt(PrimeP p);  // zero
    CycInt(PrimeP p, std::vector<mpz_class> coeffs);

    static CycInt from_int(PrimeP p, const mpz_class& n);
    static CycInt rho(PrimeP p) { return rho_pow(p, 1); }
    static CycInt rho_pow(PrimeP p, long k);  // any k, mod p
    static CycInt eta(PrimeP p);              // rho - 1

    /// delta_s = 1 + rho + ... + rho^{s-1}; depends only on s mod p.
    static CycInt delta(PrimeP p, long s);

    PrimeP prime() const { return p_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }
    const mpz_class& coeff(int i) const { return c_[i]; }

    bool is_zero() const;
    bool is_one() const;
    /// True iff the element lies in Z (only the rho^0 coordinate nonzero).
    bool is_rational() const;

    CycInt operator+(const CycInt& o) const;
    CycInt operator-(const CycInt& o) const;
    CycInt operator-() const;
    CycInt operator*(const CycInt& o) const;
    CycInt operator*(const mpz_class& n) const;
    CycInt pow(unsigned long e) const;

    bool operator==(const CycInt& o) const;
    bool operator!=(const CycInt& o) const { return !(*this == o); }
    bool operator<(const CycInt& o) const;  // lexicographic, for map keys

    /// Substitute rho -> rho^s. For s a unit mod p this is the Galois
    /// automorphism tau with tau(rho) = rho^s; s = 1 is the identity.
    CycInt subst_rho_pow(long s) const;

    std::string to_string() const;  // human-readable, e.g. "1+rho", "-3*rho^2"

   private:
    void check_same(const CycInt& o) const;

    PrimeP p_;
    std::vector<mpz_class> c_;
};

/// tau_s with the precondition that s generates (Z/pZ)^*.
CycInt tau_on_cyc(const CycInt& a, long s);

/// Solve a*X = b exactly in Z[rho]. Returns nothing when no integral
/// solution exists. Exact rational elimination on the multiplication
/// matrix of a, then an integrality check.
std::optional<CycInt> cyc_solve(const CycInt& a, const CycInt& b);

/// Inverse in Z[rho] if a is a unit there.
std::optional<CycInt> cyc_invert(const CycInt& a);

/// Exact division by eta^k in Z[rho]; nothing if not exactly divisible.
std::optional<CycInt> cyc_div_eta_pow(const CycInt& a, int k);

/// The structural constants of section-one arithmetic: eta = rho-1, the
/// integers b_i = binom(p,i)/p, y = sum b_i eta^{i-1}, and the unit x with
/// p = x*eta^{p-1} and x*y = -1. All four identities are re-verified
/// exactly at construction; failure is an internal-consistency error.
struct EtaData {
    PrimeP p;
    CycInt eta;
    std::vector<mpz_class> b;  // b[i-1] = binom(p,i)/p for 1 <= i <= p-1
    CycInt y;
    CycInt x_unit;

    static EtaData compute(PrimeP p);
};

/// Binomial coefficient, exact.
mpz_class binomial(unsigned long n, unsigned long k);

}  // namespace etalift

#endif
