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

#ifndef ETALIFT_LINALG_HPP
#define ETALIFT_LINALG_HPP

#include <optional>
#include <vector>

#include "etalift/ring.hpp"

namespace etalift {

using ElemMat = std::vector<std::vector<RingElem>>;
using CycMat = std::vector<std::vector<CycInt>>;

/// Fraction-free (Bareiss) determinant over a ring with exact base, where
/// the intermediate divisions are exact by the Sylvester identity.
RingElem det_bareiss(ElemMat m);

CycInt det_bareiss_cyc(CycMat m, PrimeP p);

/// Gaussian elimination with unit pivots; works whenever every nonzero pivot
/// candidate that is needed turns out invertible (fields, and local rings for
/// invertible matrices). nullopt when stuck on a column with nonzero
/// non-invertible entries only.
std::optional<RingElem> det_gauss_units(ElemMat m);

/// Determinant over a finite coefficient ring, computed by lifting the
/// entries to the exact base (det commutes with any ring homomorphism).
RingElem det_lift(const ElemMat& m);

/// Dispatcher: Bareiss over exact bases, unit-pivot Gaussian when it
/// applies, integer lift otherwise.
RingElem det(const ElemMat& m);

/// Row rank over a field-like ring (unit pivots must exist).
size_t rank_field(ElemMat m);

}  // namespace etalift

#endif
