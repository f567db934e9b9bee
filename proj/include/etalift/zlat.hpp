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

#ifndef ETALIFT_ZLAT_HPP
#define ETALIFT_ZLAT_HPP

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace etalift {

using ZVec = std::vector<mpz_class>;
using ZMat = std::vector<ZVec>;  // rows

/// Row-style Hermite Normal Form of the row span: echelon rows with positive
/// pivots and entries above each pivot reduced into [0, pivot). Zero rows
/// are dropped. The row span is unchanged.
ZMat hnf(ZMat rows);

/// HNF together with a record of the combination: each returned row of h is
/// an integer combination of the input rows, with the coefficients in the
/// matching row of u (u has one row per row of h, one column per input row).
struct HnfT {
    ZMat h;
    ZMat u;
};
HnfT hnf_transform(const ZMat& rows);

/// Canonical coset representative of v modulo the lattice (rows must be HNF).
ZVec lattice_reduce(const ZMat& h, ZVec v);

bool lattice_contains(const ZMat& h, const ZVec& v);

/// Is span(a) a subset of span(b_hnf)?
bool lattice_subset(const ZMat& a, const ZMat& b_hnf);

/// Integer row y with y*rows = b, if one exists.
std::optional<ZVec> solve_in_span(const ZMat& rows, const ZVec& b);

/// {x in Z^n : x*a in rowspan(l)}, as an HNF basis. a is n x m; l rows have
/// length m (l may be empty, giving the plain kernel of a).
ZMat preimage_lattice(const ZMat& a, const ZMat& l, size_t n, size_t m);

/// Index [Z^n : span] for a full-rank lattice (product of HNF pivots);
/// nothing when rank is deficient.
std::optional<mpz_class> lattice_index(const ZMat& h, size_t n);

}  // namespace etalift

#endif
