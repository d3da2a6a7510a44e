#ifndef DMTL_TIME_POINT_HPP
#define DMTL_TIME_POINT_HPP

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>
#include <type_traits>

#include <boost/multiprecision/cpp_int.hpp>

namespace dmtl {

using Integer = boost::multiprecision::number<boost::multiprecision::cpp_int_backend<>,
                                              boost::multiprecision::et_off>;

/// A dyadic rational numerator / 2^exponent, or ±∞.
///
/// Finite values are kept reduced: either the exponent is 0 or the
/// numerator is odd. Equal values therefore have identical representations.
class TimePoint {
public:
    enum class Kind : std::uint8_t { NegInf, Finite, PosInf };

    TimePoint() = default;

    template <typename T, typename = std::enable_if_t<std::is_integral_v<T>>>
    TimePoint(T value) : num_(value) {}

    static TimePoint dyadic(Integer numerator, unsigned exponent);
    static TimePoint pos_inf();
    static TimePoint neg_inf();

    /// Parses `inf`, `-inf`, decimals with an optional s/m/h/d unit suffix,
    /// and clock literals `HH:MM[:SS[.frac]]`. Throws InvalidValue on
    /// malformed or non-dyadic input.
    static TimePoint parse(std::string_view text);

    /// Exact conversion of a finite double (doubles are dyadic); ±inf map
    /// to the infinities. NaN is rejected.
    static TimePoint from_double(double value);

    Kind kind() const { return kind_; }
    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_pos_inf() const { return kind_ == Kind::PosInf; }
    bool is_neg_inf() const { return kind_ == Kind::NegInf; }
    bool is_zero() const { return is_finite() && num_ == 0; }
    bool is_negative() const { return is_neg_inf() || (is_finite() && num_ < 0); }

    const Integer& numerator() const { return num_; }
    unsigned exponent() const { return exp_; }

    /// Exact decimal rendering (`10.625`, `-3`, `inf`).
    std::string to_string() const;
    /// `HH:MM:SS[.frac]` for finite nonnegative values, decimal otherwise.
    std::string to_clock() const;
    double to_double() const;

    TimePoint halved() const;
    TimePoint times(std::int64_t k) const;
    /// True iff this == k·d for an integer k. Requires both finite, d > 0.
    bool is_multiple_of(const TimePoint& d) const;

    friend TimePoint operator+(const TimePoint& a, const TimePoint& b);
    friend TimePoint operator-(const TimePoint& a, const TimePoint& b);
    friend TimePoint operator-(const TimePoint& a);

    friend bool operator==(const TimePoint& a, const TimePoint& b) {
        return a.kind_ == b.kind_ && a.exp_ == b.exp_ && a.num_ == b.num_;
    }
    friend std::strong_ordering operator<=>(const TimePoint& a, const TimePoint& b);

private:
    void reduce();

    Kind kind_ = Kind::Finite;
    Integer num_ = 0;
    unsigned exp_ = 0;
};

std::ostream& operator<<(std::ostream& os, const TimePoint& t);

const TimePoint& min(const TimePoint& a, const TimePoint& b);
const TimePoint& max(const TimePoint& a, const TimePoint& b);

}  // namespace dmtl

#endif  // DMTL_TIME_POINT_HPP
