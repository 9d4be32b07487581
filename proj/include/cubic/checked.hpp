#pragma once

#include <cstdint>
#include <string>

#include "cubic/errors.hpp"

namespace cubic {

using i128 = __int128;

namespace checked {

inline i128 add(i128 a, i128 b) {
    i128 r;
    if (__builtin_add_overflow(a, b, &r)) throw OverflowError("128-bit overflow in addition");
    return r;
}

inline i128 sub(i128 a, i128 b) {
    i128 r;
    if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("128-bit overflow in subtraction");
    return r;
}

inline i128 mul(i128 a, i128 b) {
    i128 r;
    if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("128-bit overflow in multiplication");
    return r;
}

inline std::int64_t narrow(i128 v) {
    if (v > INT64_MAX || v < INT64_MIN) throw OverflowError("value does not fit in 64 bits");
    return static_cast<std::int64_t>(v);
}

}  // namespace checked

std::string to_string(i128 v);

}  // namespace cubic
