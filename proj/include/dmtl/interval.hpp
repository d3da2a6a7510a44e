#ifndef DMTL_INTERVAL_HPP
#define DMTL_INTERVAL_HPP

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dmtl/time_point.hpp"

namespace dmtl {

enum class TimeFormat { Seconds, Clock };

/// A nonempty interval of the timeline. Infinite endpoints are always open.
class Interval {
public:
    /// Throws InvalidValue when the bounds describe an empty set.
    /// Closed infinite ends are silently opened.
    Interval(TimePoint lo, bool lo_closed, TimePoint hi, bool hi_closed);

    /// nullopt instead of throwing when the set is empty.
    static std::optional<Interval> make(TimePoint lo, bool lo_closed, TimePoint hi, bool hi_closed);
    static Interval point(const TimePoint& t) { return Interval(t, true, t, true); }
    static Interval closed(TimePoint lo, TimePoint hi) { return Interval(std::move(lo), true, std::move(hi), true); }
    static Interval open(TimePoint lo, TimePoint hi) { return Interval(std::move(lo), false, std::move(hi), false); }
    static Interval all() { return Interval(TimePoint::neg_inf(), false, TimePoint::pos_inf(), false); }
    static Interval parse(std::string_view text);

    const TimePoint& lo() const { return lo_; }
    const TimePoint& hi() const { return hi_; }
    bool lo_closed() const { return lo_closed_; }
    bool hi_closed() const { return hi_closed_; }

    bool is_punctual() const { return lo_ == hi_; }
    bool is_open() const { return !lo_closed_ && !hi_closed_; }
    bool contains(const TimePoint& t) const;
    bool contains(const Interval& other) const;
    /// hi − lo, +∞ when unbounded.
    TimePoint length() const;

    std::string to_string(TimeFormat fmt = TimeFormat::Seconds) const;

    friend bool operator==(const Interval&, const Interval&) = default;

private:
    TimePoint lo_;
    TimePoint hi_;
    bool lo_closed_;
    bool hi_closed_;
};

/// An interval with nonnegative endpoints, used as an operator range ϱ.
class Range {
public:
    explicit Range(Interval iv);
    Range(TimePoint lo, bool lo_closed, TimePoint hi, bool hi_closed)
        : Range(Interval(std::move(lo), lo_closed, std::move(hi), hi_closed)) {}
    static Range punctual(const TimePoint& r) { return Range(Interval::point(r)); }
    static Range parse(std::string_view text) { return Range(Interval::parse(text)); }

    const Interval& interval() const { return iv_; }
    const TimePoint& r1() const { return iv_.lo(); }
    const TimePoint& r2() const { return iv_.hi(); }
    bool is_punctual() const { return iv_.is_punctual(); }
    bool is_open() const { return iv_.is_open(); }
    /// Punctual or open: the only shapes allowed in normal form.
    bool is_normal() const { return is_punctual() || is_open(); }
    bool contains_zero() const { return iv_.contains(TimePoint(0)); }

    std::string to_string(TimeFormat fmt = TimeFormat::Seconds) const { return iv_.to_string(fmt); }

    friend bool operator==(const Range&, const Range&) = default;

private:
    Interval iv_;
};

std::ostream& operator<<(std::ostream& os, const Interval& iv);
std::ostream& operator<<(std::ostream& os, const Range& r);

/// The strict linear order ≺ on intervals.
bool precedes(const Interval& a, const Interval& b);
/// a ends strictly before b does (right endpoint order, `)` before `]`).
bool ends_before(const Interval& a, const Interval& b);

std::optional<Interval> intersect(const Interval& a, const Interval& b);
/// The union when it is a single interval.
std::optional<Interval> union_if_interval(const Interval& a, const Interval& b);
Interval closure(const Interval& a);

/// ι +° ϱ = {t + k | t ∈ ι, k ∈ ϱ}.
Interval plus_o(const Interval& i, const Range& r);
/// ι −° ϱ = {t − k | t ∈ ι, k ∈ ϱ}.
Interval minus_o(const Interval& i, const Range& r);
/// ϱ ⊑ ι: r₂ − r₁ ≤ ι_e − ι_b.
bool fits(const Range& r, const Interval& i);
/// ι +ᶜ ϱ = {t | t − k ∈ ι for all k ∈ ϱ}, when nonempty.
std::optional<Interval> plus_c(const Interval& i, const Range& r);
/// ι −ᶜ ϱ = {t | t + k ∈ ι for all k ∈ ϱ}, when nonempty.
std::optional<Interval> minus_c(const Interval& i, const Range& r);

/// Largest d > 0 such that every element is an integer multiple of d;
/// 1 for {0}.
TimePoint gcd_dyadic(std::span<const TimePoint> values);

/// Splits a range into punctual and open pieces covering the same set,
/// in increasing order.
std::vector<Range> split_range(const Range& r);

}  // namespace dmtl

#endif  // DMTL_INTERVAL_HPP
