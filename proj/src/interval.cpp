#include "dmtl/interval.hpp"

#include <algorithm>
#include <cctype>
#include <ostream>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

bool empty_bounds(const TimePoint& lo, bool lo_closed, const TimePoint& hi, bool hi_closed) {
    if (lo.is_pos_inf() || hi.is_neg_inf()) return true;
    if (hi < lo) return true;
    if (lo == hi) return !(lo_closed && hi_closed) || !lo.is_finite();
    return false;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

std::string render(const TimePoint& t, TimeFormat fmt) {
    return fmt == TimeFormat::Clock ? t.to_clock() : t.to_string();
}

}  // namespace

Interval::Interval(TimePoint lo, bool lo_closed, TimePoint hi, bool hi_closed)
    : lo_(std::move(lo)), hi_(std::move(hi)), lo_closed_(lo_closed), hi_closed_(hi_closed) {
    if (!lo_.is_finite()) lo_closed_ = false;
    if (!hi_.is_finite()) hi_closed_ = false;
    if (empty_bounds(lo_, lo_closed_, hi_, hi_closed_))
        throw InvalidValue("empty interval " + to_string());
}

std::optional<Interval> Interval::make(TimePoint lo, bool lo_closed, TimePoint hi, bool hi_closed) {
    if (!lo.is_finite()) lo_closed = false;
    if (!hi.is_finite()) hi_closed = false;
    if (empty_bounds(lo, lo_closed, hi, hi_closed)) return std::nullopt;
    return Interval(std::move(lo), lo_closed, std::move(hi), hi_closed);
}

Interval Interval::parse(std::string_view text) {
    std::string_view s = trim(text);
    if (s.size() < 5 || (s.front() != '[' && s.front() != '(') || (s.back() != ']' && s.back() != ')'))
        throw InvalidValue("malformed interval '" + std::string(text) + "'");
    auto comma = s.find(',');
    if (comma == std::string_view::npos || s.find(',', comma + 1) != std::string_view::npos)
        throw InvalidValue("malformed interval '" + std::string(text) + "'");
    TimePoint lo = TimePoint::parse(trim(s.substr(1, comma - 1)));
    TimePoint hi = TimePoint::parse(trim(s.substr(comma + 1, s.size() - comma - 2)));
    auto iv = make(lo, s.front() == '[', hi, s.back() == ']');
    if (!iv) throw InvalidValue("empty interval '" + std::string(text) + "'");
    return *iv;
}

bool Interval::contains(const TimePoint& t) const {
    if (t < lo_ || hi_ < t) return false;
    if (t == lo_ && !lo_closed_) return false;
    if (t == hi_ && !hi_closed_) return false;
    return true;
}

bool Interval::contains(const Interval& other) const {
    bool lo_ok = lo_ < other.lo_ || (lo_ == other.lo_ && (lo_closed_ || !other.lo_closed_));
    bool hi_ok = other.hi_ < hi_ || (hi_ == other.hi_ && (hi_closed_ || !other.hi_closed_));
    return lo_ok && hi_ok;
}

TimePoint Interval::length() const { return hi_ - lo_; }

std::string Interval::to_string(TimeFormat fmt) const {
    std::string out;
    out += lo_closed_ ? '[' : '(';
    out += render(lo_, fmt);
    out += ',';
    out += render(hi_, fmt);
    out += hi_closed_ ? ']' : ')';
    return out;
}

Range::Range(Interval iv) : iv_(std::move(iv)) {
    if (iv_.lo().is_negative()) throw InvalidValue("range " + iv_.to_string() + " has a negative endpoint");
}

std::ostream& operator<<(std::ostream& os, const Interval& iv) { return os << iv.to_string(); }
std::ostream& operator<<(std::ostream& os, const Range& r) { return os << r.to_string(); }

bool precedes(const Interval& a, const Interval& b) {
    if (a.lo() != b.lo()) return a.lo() < b.lo();
    if (a.lo_closed() != b.lo_closed()) return a.lo_closed();
    if (a.hi() != b.hi()) return a.hi() < b.hi();
    return !a.hi_closed() && b.hi_closed();
}

bool ends_before(const Interval& a, const Interval& b) {
    if (a.hi() != b.hi()) return a.hi() < b.hi();
    return !a.hi_closed() && b.hi_closed();
}

std::optional<Interval> intersect(const Interval& a, const Interval& b) {
    const TimePoint* lo;
    bool lo_closed;
    if (a.lo() == b.lo()) {
        lo = &a.lo();
        lo_closed = a.lo_closed() && b.lo_closed();
    } else if (a.lo() < b.lo()) {
        lo = &b.lo();
        lo_closed = b.lo_closed();
    } else {
        lo = &a.lo();
        lo_closed = a.lo_closed();
    }
    const TimePoint* hi;
    bool hi_closed;
    if (a.hi() == b.hi()) {
        hi = &a.hi();
        hi_closed = a.hi_closed() && b.hi_closed();
    } else if (a.hi() < b.hi()) {
        hi = &a.hi();
        hi_closed = a.hi_closed();
    } else {
        hi = &b.hi();
        hi_closed = b.hi_closed();
    }
    return Interval::make(*lo, lo_closed, *hi, hi_closed);
}

std::optional<Interval> union_if_interval(const Interval& a, const Interval& b) {
    const Interval& first = precedes(b, a) ? b : a;
    const Interval& second = precedes(b, a) ? a : b;
    bool joined = second.lo() < first.hi() ||
                  (second.lo() == first.hi() && (first.hi_closed() || second.lo_closed()));
    if (!joined) return std::nullopt;
    bool lo_closed = first.lo_closed() || (first.lo() == second.lo() && second.lo_closed());
    const Interval& last = ends_before(first, second) ? second : first;
    return Interval(first.lo(), lo_closed, last.hi(), last.hi_closed());
}

Interval closure(const Interval& a) { return Interval(a.lo(), true, a.hi(), true); }

Interval plus_o(const Interval& i, const Range& r) {
    return Interval(i.lo() + r.r1(), i.lo_closed() && r.interval().lo_closed(),
                    i.hi() + r.r2(), i.hi_closed() && r.interval().hi_closed());
}

Interval minus_o(const Interval& i, const Range& r) {
    return Interval(i.lo() - r.r2(), i.lo_closed() && r.interval().hi_closed(),
                    i.hi() - r.r1(), i.hi_closed() && r.interval().lo_closed());
}

bool fits(const Range& r, const Interval& i) { return r.interval().length() <= i.length(); }

std::optional<Interval> plus_c(const Interval& i, const Range& r) {
    if (!fits(r, i)) return std::nullopt;
    TimePoint lo = TimePoint::neg_inf();
    bool lo_closed = false;
    if (r.r2().is_pos_inf()) {
        // every earlier instant must be covered, so ι has to be unbounded on the left
        if (!i.lo().is_neg_inf()) return std::nullopt;
    } else {
        lo = i.lo() + r.r2();
        lo_closed = i.lo_closed() || !r.interval().hi_closed();
    }
    return Interval::make(std::move(lo), lo_closed, i.hi() + r.r1(),
                          i.hi_closed() || !r.interval().lo_closed());
}

std::optional<Interval> minus_c(const Interval& i, const Range& r) {
    if (!fits(r, i)) return std::nullopt;
    TimePoint hi = TimePoint::pos_inf();
    bool hi_closed = false;
    if (r.r2().is_pos_inf()) {
        if (!i.hi().is_pos_inf()) return std::nullopt;
    } else {
        hi = i.hi() - r.r2();
        hi_closed = i.hi_closed() || !r.interval().hi_closed();
    }
    return Interval::make(i.lo() - r.r1(), i.lo_closed() || !r.interval().lo_closed(),
                          std::move(hi), hi_closed);
}

TimePoint gcd_dyadic(std::span<const TimePoint> values) {
    if (values.empty()) throw InvalidValue("gcd of an empty set");
    unsigned max_exp = 0;
    for (const auto& v : values) {
        if (!v.is_finite()) throw InvalidValue("gcd of an infinite value");
        max_exp = std::max(max_exp, v.exponent());
    }
    Integer g = 0;
    for (const auto& v : values) {
        Integer a = boost::multiprecision::abs(v.numerator()) << (max_exp - v.exponent());
        g = boost::multiprecision::gcd(g, a);
    }
    if (g == 0) return TimePoint(1);
    return TimePoint::dyadic(g, max_exp);
}

std::vector<Range> split_range(const Range& r) {
    if (r.is_normal()) return {r};
    std::vector<Range> out;
    const Interval& iv = r.interval();
    if (iv.lo_closed()) out.push_back(Range::punctual(iv.lo()));
    out.emplace_back(iv.lo(), false, iv.hi(), false);
    if (iv.hi_closed()) out.push_back(Range::punctual(iv.hi()));
    return out;
}

}  // namespace dmtl
