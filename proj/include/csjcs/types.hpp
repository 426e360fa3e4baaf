// SPDX-License-Identifier: Apache-2.0
//
// csjcs - compressive-sidelobe joint communication and sensing
// Copyright (C) 2026 The csjcs authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace csjcs {

using cd = std::complex<double>;
using CVector = std::vector<cd>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kSpeedOfLight = 299792458.0;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Dense row-major matrix. Used for the N x M symbol and sample grids, where
/// row n is the symbol index inside a beam and column m is the beam index.
template <typename T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    const T& operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    T& at(std::size_t r, std::size_t c)
    {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("Matrix index out of range");
        return (*this)(r, c);
    }
    const T& at(std::size_t r, std::size_t c) const
    {
        if (r >= rows_ || c >= cols_) throw std::out_of_range("Matrix index out of range");
        return (*this)(r, c);
    }

    std::vector<T>& data() { return data_; }
    const std::vector<T>& data() const { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using CMatrix = Matrix<cd>;

/// Uniform angle grid in degrees, inclusive of both ends when the span is a
/// whole number of steps. Points are computed as min + i*step to avoid drift.
struct AngleGrid {
    double min_deg = -50.0;
    double max_deg = 50.0;
    double step_deg = 0.25;

    std::vector<double> points() const
    {
        if (!(step_deg > 0.0) || !(max_deg >= min_deg))
            throw std::domain_error("AngleGrid: need step > 0 and max >= min");
        const auto count = static_cast<std::size_t>(std::floor((max_deg - min_deg) / step_deg + 1e-9)) + 1;
        std::vector<double> out(count);
        for (std::size_t i = 0; i < count; ++i) out[i] = min_deg + static_cast<double>(i) * step_deg;
        return out;
    }

    bool operator==(const AngleGrid&) const = default;
};

} // namespace csjcs
