#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>

#include "synckit/error.hpp"

namespace synckit {

using CellType = int;

/// Commutative monoids for edge weights. Every kind is carried on a 64-bit
/// integer so that balanced checks stay exact.
enum class MonoidKind {
    IntegerAdd, ///< (Z, +, 0)
    TropicalMin ///< (Z u {+inf}, min, +inf)
};

struct MonoidSpec {
    using value_type = std::int64_t;

    MonoidKind kind = MonoidKind::IntegerAdd;

    static constexpr value_type infinity = std::numeric_limits<value_type>::max();

    constexpr value_type zero() const noexcept
    {
        return kind == MonoidKind::IntegerAdd ? 0 : infinity;
    }

    value_type add(value_type a, value_type b) const
    {
        if (kind == MonoidKind::TropicalMin)
            return a < b ? a : b;
        value_type out;
        if (__builtin_add_overflow(a, b, &out))
            throw Error(ErrorKind::MalformedDocument, "integer weight overflow");
        return out;
    }

    constexpr bool is_zero(value_type a) const noexcept { return a == zero(); }

    std::string_view name() const noexcept
    {
        return kind == MonoidKind::IntegerAdd ? "int-add" : "tropical-min";
    }

    friend constexpr bool operator==(const MonoidSpec&, const MonoidSpec&) = default;
};

inline std::optional<MonoidSpec> monoid_from_name(std::string_view name)
{
    if (name == "int-add")
        return MonoidSpec{MonoidKind::IntegerAdd};
    if (name == "tropical-min")
        return MonoidSpec{MonoidKind::TropicalMin};
    return std::nullopt;
}

/// An element of the monoid M_{receiver_type, sender_type}.
struct Weight {
    MonoidSpec::value_type value = 0;
    CellType receiver_type = 1;
    CellType sender_type = 1;
    MonoidSpec monoid{};

    friend constexpr bool operator==(const Weight&, const Weight&) = default;
};

inline Weight zero_weight(MonoidSpec monoid, CellType receiver, CellType sender)
{
    return Weight{monoid.zero(), receiver, sender, monoid};
}

/// Parallel composition of two weights living in the same monoid.
inline Weight monoid_add(const Weight& a, const Weight& b)
{
    if (a.receiver_type != b.receiver_type || a.sender_type != b.sender_type || !(a.monoid == b.monoid))
        throw Error(ErrorKind::TypePairMismatch,
                    "weights belong to M(" + std::to_string(a.receiver_type) + "," +
                        std::to_string(a.sender_type) + ") and M(" + std::to_string(b.receiver_type) + "," +
                        std::to_string(b.sender_type) + ")");
    return Weight{a.monoid.add(a.value, b.value), a.receiver_type, a.sender_type, a.monoid};
}

inline bool is_zero(const Weight& a) noexcept { return a.monoid.is_zero(a.value); }

} // namespace synckit
