#include "dmtl/time_point.hpp"

#include <cctype>
#include <cmath>
#include <ostream>

#include "dmtl/errors.hpp"

namespace dmtl {

namespace {

Integer pow5(unsigned n) {
    Integer r = 1;
    for (unsigned i = 0; i < n; ++i) r *= 5;
    return r;
}

unsigned unit_seconds(char c) {
    switch (c) {
        case 's': return 1;
        case 'm': return 60;
        case 'h': return 3600;
        case 'd': return 86400;
        default: return 0;
    }
}

bool all_digits(std::string_view s) {
    if (s.empty()) return false;
    for (char c : s)
        if (!std::isdigit(static_cast<unsigned char>(c))) return false;
    return true;
}

// value = digits / 10^frac_len * scale, required to be dyadic
TimePoint decimal_to_dyadic(std::string_view int_part, std::string_view frac_part,
                            const Integer& scale, bool negative, std::string_view text) {
    Integer digits = 0;
    for (char c : int_part) digits = digits * 10 + (c - '0');
    for (char c : frac_part) digits = digits * 10 + (c - '0');
    digits *= scale;
    const auto k = static_cast<unsigned>(frac_part.size());
    Integer five_k = pow5(k);
    if (digits % five_k != 0)
        throw InvalidValue("time literal '" + std::string(text) + "' is not a dyadic rational");
    Integer num = digits / five_k;
    if (negative) num = -num;
    return TimePoint::dyadic(num, k);
}

}  // namespace

void TimePoint::reduce() {
    if (num_ == 0) {
        exp_ = 0;
        return;
    }
    if (exp_ == 0) return;
    unsigned tz = boost::multiprecision::lsb(boost::multiprecision::abs(num_));
    unsigned shift = tz < exp_ ? tz : exp_;
    if (shift) {
        num_ >>= shift;
        exp_ -= shift;
    }
}

TimePoint TimePoint::dyadic(Integer numerator, unsigned exponent) {
    TimePoint t;
    t.num_ = std::move(numerator);
    t.exp_ = exponent;
    t.reduce();
    return t;
}

TimePoint TimePoint::pos_inf() {
    TimePoint t;
    t.kind_ = Kind::PosInf;
    return t;
}

TimePoint TimePoint::neg_inf() {
    TimePoint t;
    t.kind_ = Kind::NegInf;
    return t;
}

TimePoint TimePoint::parse(std::string_view text) {
    std::string_view s = text;
    if (s.empty()) throw InvalidValue("empty time literal");
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    if (s == "inf" || s == "Inf" || s == "INF") return negative ? neg_inf() : pos_inf();

    if (s.find(':') != std::string_view::npos) {
        // clock literal
        std::string_view parts[3];
        int n = 0;
        std::size_t start = 0;
        while (true) {
            std::size_t colon = s.find(':', start);
            if (n == 3) throw InvalidValue("malformed clock literal '" + std::string(text) + "'");
            parts[n++] = s.substr(start, colon == std::string_view::npos ? colon : colon - start);
            if (colon == std::string_view::npos) break;
            start = colon + 1;
        }
        if (n < 2) throw InvalidValue("malformed clock literal '" + std::string(text) + "'");
        std::string_view sec = n == 3 ? parts[2] : std::string_view("0");
        std::string_view sec_int = sec, sec_frac;
        if (auto dot = sec.find('.'); dot != std::string_view::npos) {
            sec_int = sec.substr(0, dot);
            sec_frac = sec.substr(dot + 1);
            if (!all_digits(sec_frac))
                throw InvalidValue("malformed clock literal '" + std::string(text) + "'");
        }
        if (!all_digits(parts[0]) || !all_digits(parts[1]) || !all_digits(sec_int) ||
            parts[1].size() != 2 || (n == 3 && sec_int.size() != 2))
            throw InvalidValue("malformed clock literal '" + std::string(text) + "'");
        int mm = std::stoi(std::string(parts[1]));
        int ss = std::stoi(std::string(sec_int));
        if (mm > 59 || ss > 59) throw InvalidValue("clock field out of range in '" + std::string(text) + "'");
        Integer hh{std::string(parts[0])};
        TimePoint whole = TimePoint::dyadic(hh * 3600 + mm * 60 + ss, 0);
        TimePoint frac = decimal_to_dyadic("0", sec_frac, 1, false, text);
        TimePoint v = whole + frac;
        return negative ? -v : v;
    }

    Integer scale = 1;
    if (!s.empty() && std::isalpha(static_cast<unsigned char>(s.back()))) {
        unsigned u = unit_seconds(s.back());
        if (u == 0) throw InvalidValue("unknown time unit in '" + std::string(text) + "'");
        scale = u;
        s.remove_suffix(1);
    }
    std::string_view int_part = s, frac_part;
    if (auto dot = s.find('.'); dot != std::string_view::npos) {
        int_part = s.substr(0, dot);
        frac_part = s.substr(dot + 1);
        if (int_part.empty()) int_part = "0";
        if (!all_digits(frac_part))
            throw InvalidValue("malformed number '" + std::string(text) + "'");
    }
    if (!all_digits(int_part)) throw InvalidValue("malformed number '" + std::string(text) + "'");
    return decimal_to_dyadic(int_part, frac_part, scale, negative, text);
}

TimePoint TimePoint::from_double(double value) {
    if (std::isnan(value)) throw InvalidValue("NaN is not a time point");
    if (std::isinf(value)) return value > 0 ? pos_inf() : neg_inf();
    int e = 0;
    double m = std::frexp(value, &e);  // value = m * 2^e, 0.5 <= |m| < 1
    // 53 bits of mantissa
    auto mant = static_cast<std::int64_t>(std::ldexp(m, 53));
    int shift = e - 53;
    Integer num = mant;
    if (shift >= 0) return dyadic(num << shift, 0);
    return dyadic(num, static_cast<unsigned>(-shift));
}

std::string TimePoint::to_string() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    if (exp_ == 0) return num_.str();
    Integer scaled = boost::multiprecision::abs(num_) * pow5(exp_);
    std::string digits = scaled.str();
    if (digits.size() <= exp_) digits.insert(0, exp_ - digits.size() + 1, '0');
    digits.insert(digits.size() - exp_, ".");
    return (num_ < 0 ? "-" : "") + digits;
}

std::string TimePoint::to_clock() const {
    if (!is_finite() || num_ < 0) return to_string();
    Integer whole = num_ >> exp_;
    TimePoint frac = *this - TimePoint::dyadic(whole, 0);
    Integer h = whole / 3600, m = (whole / 60) % 60, s = whole % 60;
    auto two = [](const Integer& v) {
        std::string r = v.str();
        return r.size() < 2 ? "0" + r : r;
    };
    std::string out = two(h) + ":" + two(m) + ":" + two(s);
    if (!frac.is_zero()) {
        std::string f = frac.to_string();  // "0.xxx"
        out += f.substr(1);
    }
    return out;
}

double TimePoint::to_double() const {
    if (is_pos_inf()) return HUGE_VAL;
    if (is_neg_inf()) return -HUGE_VAL;
    return std::ldexp(num_.convert_to<double>(), -static_cast<int>(exp_));
}

TimePoint TimePoint::halved() const {
    if (!is_finite()) return *this;
    return dyadic(num_, exp_ + 1);
}

TimePoint TimePoint::times(std::int64_t k) const {
    if (!is_finite()) {
        if (k == 0) throw UndefinedSum("infinity times zero");
        return (k > 0) == is_pos_inf() ? pos_inf() : neg_inf();
    }
    return dyadic(num_ * k, exp_);
}

bool TimePoint::is_multiple_of(const TimePoint& d) const {
    if (!is_finite() || !d.is_finite() || d.num_ <= 0)
        throw InvalidValue("is_multiple_of needs finite operands and a positive divisor");
    // this / d = num_ * 2^(d.exp) / (d.num * 2^exp)
    Integer a = num_, b = d.num_;
    if (d.exp_ > exp_) a <<= (d.exp_ - exp_);
    else b <<= (exp_ - d.exp_);
    return a % b == 0;
}

TimePoint operator+(const TimePoint& a, const TimePoint& b) {
    if (!a.is_finite() || !b.is_finite()) {
        if ((a.is_pos_inf() && b.is_neg_inf()) || (a.is_neg_inf() && b.is_pos_inf()))
            throw UndefinedSum("inf + -inf is undefined");
        return a.is_finite() ? b : a;
    }
    if (a.exp_ == b.exp_) return TimePoint::dyadic(a.num_ + b.num_, a.exp_);
    if (a.exp_ > b.exp_) return TimePoint::dyadic(a.num_ + (b.num_ << (a.exp_ - b.exp_)), a.exp_);
    return TimePoint::dyadic((a.num_ << (b.exp_ - a.exp_)) + b.num_, b.exp_);
}

TimePoint operator-(const TimePoint& a) {
    if (a.is_pos_inf()) return TimePoint::neg_inf();
    if (a.is_neg_inf()) return TimePoint::pos_inf();
    TimePoint r = a;
    r.num_ = -r.num_;
    return r;
}

TimePoint operator-(const TimePoint& a, const TimePoint& b) { return a + (-b); }

std::strong_ordering operator<=>(const TimePoint& a, const TimePoint& b) {
    if (a.kind_ != b.kind_) return a.kind_ <=> b.kind_;
    if (!a.is_finite()) return std::strong_ordering::equal;
    auto cmp = [](const Integer& x, const Integer& y) {
        int c = x.compare(y);
        return c < 0 ? std::strong_ordering::less
                     : (c > 0 ? std::strong_ordering::greater : std::strong_ordering::equal);
    };
    if (a.exp_ == b.exp_) return cmp(a.num_, b.num_);
    Integer x = a.num_, y = b.num_;
    if (a.exp_ > b.exp_) y <<= (a.exp_ - b.exp_);
    else x <<= (b.exp_ - a.exp_);
    return cmp(x, y);
}

std::ostream& operator<<(std::ostream& os, const TimePoint& t) { return os << t.to_string(); }

const TimePoint& min(const TimePoint& a, const TimePoint& b) { return b < a ? b : a; }
const TimePoint& max(const TimePoint& a, const TimePoint& b) { return a < b ? b : a; }

}  // namespace dmtl
