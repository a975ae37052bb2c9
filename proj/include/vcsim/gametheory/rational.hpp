#pragma once

#include <cstdint>
#include <numeric>
#include <stdexcept>
#include <string>

namespace vcsim::gametheory {

// Exact rational arithmetic over 64-bit terms. The games in this project use
// tiny sampled integers, so overflow is out of reach; normalized on every
// operation.
class rat {
  public:
    rat() = default;
    rat(std::int64_t n) : num_(n), den_(1) {}
    rat(std::int64_t n, std::int64_t d) : num_(n), den_(d) {
        if (den_ == 0) throw std::invalid_argument("rat: zero denominator");
        normalize();
    }

    std::int64_t num() const { return num_; }
    std::int64_t den() const { return den_; }

    friend rat operator+(const rat& a, const rat& b) {
        return rat(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend rat operator-(const rat& a, const rat& b) {
        return rat(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend rat operator*(const rat& a, const rat& b) {
        return rat(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend rat operator/(const rat& a, const rat& b) {
        return rat(a.num_ * b.den_, a.den_ * b.num_);
    }
    rat operator-() const { return rat(-num_, den_); }
    rat& operator+=(const rat& o) { return *this = *this + o; }
    rat& operator-=(const rat& o) { return *this = *this - o; }

    friend bool operator==(const rat& a, const rat& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const rat& a, const rat& b) { return !(a == b); }
    friend bool operator<(const rat& a, const rat& b) {
        return a.num_ * b.den_ < b.num_ * a.den_;
    }
    friend bool operator<=(const rat& a, const rat& b) { return a < b || a == b; }
    friend bool operator>(const rat& a, const rat& b) { return b < a; }
    friend bool operator>=(const rat& a, const rat& b) { return b <= a; }

    std::string str() const {
        if (den_ == 1) return std::to_string(num_);
        return std::to_string(num_) + "/" + std::to_string(den_);
    }

  private:
    void normalize() {
        if (den_ < 0) {
            num_ = -num_;
            den_ = -den_;
        }
        const std::int64_t g = std::gcd(num_ < 0 ? -num_ : num_, den_);
        if (g > 1) {
            num_ /= g;
            den_ /= g;
        }
        if (num_ == 0) den_ = 1;
    }

    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace vcsim::gametheory
