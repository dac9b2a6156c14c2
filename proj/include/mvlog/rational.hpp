// Copyright 2026 The mvlog Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <gmpxx.h>

#include <compare>
#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace mvlog {

/// Exact rational number. All truth degrees and LP data use it.
using Rational = mpq_class;

inline Rational make_rational(long num, long den = 1) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

/// Reduced fraction text: "4/5", "1", "0", "-3/2".
inline std::string to_string(const Rational& r) {
  return r.get_str();
}

/// Parses "3", "0.8", ".5", "4/5" (optionally signed) exactly. Returns
/// nullopt on malformed text or a zero denominator.
inline std::optional<Rational> parse_rational(std::string_view text) {
  if (text.empty()) return std::nullopt;
  bool negative = false;
  std::size_t pos = 0;
  if (text[0] == '+' || text[0] == '-') {
    negative = text[0] == '-';
    pos = 1;
  }
  std::string_view body = text.substr(pos);
  if (body.empty()) return std::nullopt;
  auto all_digits = [](std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
      if (c < '0' || c > '9') return false;
    return true;
  };
  Rational value;
  if (auto slash = body.find('/'); slash != std::string_view::npos) {
    auto num = body.substr(0, slash);
    auto den = body.substr(slash + 1);
    if (!all_digits(num) || !all_digits(den)) return std::nullopt;
    mpz_class d(std::string(den), 10);
    if (d == 0) return std::nullopt;
    value = Rational(mpz_class(std::string(num), 10), d);
  } else if (auto dot = body.find('.'); dot != std::string_view::npos) {
    auto whole = body.substr(0, dot);
    auto frac = body.substr(dot + 1);
    if ((!whole.empty() && !all_digits(whole)) || !all_digits(frac)) return std::nullopt;
    std::string digits = std::string(whole) + std::string(frac);
    mpz_class den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac.size());
    value = Rational(mpz_class(digits, 10), den);
  } else {
    if (!all_digits(body)) return std::nullopt;
    value = Rational(mpz_class(std::string(body), 10));
  }
  value.canonicalize();
  if (negative) value = -value;
  return value;
}

/// A degree of truth: an exact rational in [0,1].
class TruthDegree {
 public:
  TruthDegree() = default;
  explicit TruthDegree(Rational value) : value_(std::move(value)) {
    value_.canonicalize();
    if (value_ < 0 || value_ > 1)
      throw std::domain_error("truth degree " + to_string(value_) + " outside [0,1]");
  }
  static TruthDegree zero() { return TruthDegree(); }
  static TruthDegree one() { return TruthDegree(Rational(1)); }

  const Rational& value() const { return value_; }
  bool is_zero() const { return sgn(value_) == 0; }
  bool is_one() const { return value_ == 1; }

  friend bool operator==(const TruthDegree& a, const TruthDegree& b) { return a.value_ == b.value_; }
  friend std::strong_ordering operator<=>(const TruthDegree& a, const TruthDegree& b) {
    int c = cmp(a.value_, b.value_);
    return c < 0 ? std::strong_ordering::less
                 : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
  }

 private:
  Rational value_{0};
};

inline std::string to_string(const TruthDegree& d) { return to_string(d.value()); }

struct RationalHash {
  std::size_t operator()(const Rational& r) const {
    return std::hash<std::string>{}(r.get_str(16));
  }
};

}  // namespace mvlog
