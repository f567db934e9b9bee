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

#ifndef ETALIFT_ERRORS_HPP
#define ETALIFT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace etalift {

/// Base class for all library errors.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Mixing elements of different rings, wrong p, malformed presentations.
struct StructuralError : Error {
    explicit StructuralError(const std::string& what) : Error(what) {}
};

/// Bad argument value (s not a primitive root, pr not a multiple of p, ...).
struct ArgumentError : Error {
    explicit ArgumentError(const std::string& what) : Error(what) {}
};

/// An operation needed a unit that is not one (ominus, shift_theta, ...).
struct UnitRequiredError : Error {
    explicit UnitRequiredError(const std::string& what) : Error(what) {}
};

/// Exact division failed; this is a meaningful mathematical failure.
struct ExactDivisionError : Error {
    explicit ExactDivisionError(const std::string& what) : Error(what) {}
};

/// Unit status cannot be decided in this ring (infinite, no declared inverse).
struct UndecidableError : Error {
    explicit UndecidableError(const std::string& what) : Error(what) {}
};

/// An identity the library guarantees failed to verify; always a bug, never input.
struct InternalCheckError : Error {
    explicit InternalCheckError(const std::string& what) : Error(what) {}
};

}  // namespace etalift

#endif
