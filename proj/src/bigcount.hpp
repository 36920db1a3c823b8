#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <string>
#include <vector>

namespace rtnep::detail {

// Decimal big integer (base 1e9 limbs) for combinatorial counts that overflow
// 64 bits; only what the cap checks need.
struct BigCount {
    std::vector<uint32_t> limbs{0};  // little endian

    static BigCount from_u64(unsigned long long v) {
        BigCount b;
        b.limbs.clear();
        do {
            b.limbs.push_back(static_cast<uint32_t>(v % 1000000000ull));
            v /= 1000000000ull;
        } while (v);
        return b;
    }
    void mul_small(unsigned long long f) {
        unsigned long long carry = 0;
        for (auto& l : limbs) {
            unsigned long long t = l * f + carry;
            l = static_cast<uint32_t>(t % 1000000000ull);
            carry = t / 1000000000ull;
        }
        while (carry) {
            limbs.push_back(static_cast<uint32_t>(carry % 1000000000ull));
            carry /= 1000000000ull;
        }
    }
    void div_small(unsigned long long d) {  // exact division expected
        unsigned long long rem = 0;
        for (size_t i = limbs.size(); i-- > 0;) {
            unsigned long long t = rem * 1000000000ull + limbs[i];
            limbs[i] = static_cast<uint32_t>(t / d);
            rem = t % d;
        }
        while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
    }
    void add(const BigCount& o) {
        limbs.resize(std::max(limbs.size(), o.limbs.size()), 0);
        unsigned long long carry = 0;
        for (size_t i = 0; i < limbs.size(); ++i) {
            unsigned long long t = carry + limbs[i] + (i < o.limbs.size() ? o.limbs[i] : 0);
            limbs[i] = static_cast<uint32_t>(t % 1000000000ull);
            carry = t / 1000000000ull;
        }
        if (carry) limbs.push_back(static_cast<uint32_t>(carry));
    }
    void mul(const BigCount& o) {
        std::vector<uint64_t> acc(limbs.size() + o.limbs.size(), 0);
        for (size_t i = 0; i < limbs.size(); ++i) {
            uint64_t carry = 0;
            for (size_t j = 0; j < o.limbs.size(); ++j) {
                uint64_t t = acc[i + j] + static_cast<uint64_t>(limbs[i]) * o.limbs[j] + carry;
                acc[i + j] = t % 1000000000ull;
                carry = t / 1000000000ull;
            }
            size_t k = i + o.limbs.size();
            while (carry) {
                uint64_t t = acc[k] + carry;
                acc[k] = t % 1000000000ull;
                carry = t / 1000000000ull;
                ++k;
            }
        }
        limbs.assign(acc.begin(), acc.end());
        while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
    }
    bool fits_u64(unsigned long long& out) const {
        unsigned long long v = 0;
        for (size_t i = limbs.size(); i-- > 0;) {
            if (v > (std::numeric_limits<unsigned long long>::max() - limbs[i]) / 1000000000ull)
                return false;
            v = v * 1000000000ull + limbs[i];
        }
        out = v;
        return true;
    }
    std::string str() const {
        std::string s = std::to_string(limbs.back());
        for (size_t i = limbs.size() - 1; i-- > 0;) {
            std::string part = std::to_string(limbs[i]);
            s += std::string(9 - part.size(), '0') + part;
        }
        return s;
    }
};

inline BigCount binomial_sum(int n, int k_max) {
    // sum_{a<=k_max} C(n,a), exact stepwise C(n,a) = C(n,a-1)*(n-a+1)/a
    BigCount total = BigCount::from_u64(1);
    BigCount c = BigCount::from_u64(1);
    for (int a = 1; a <= std::min(k_max, n); ++a) {
        c.mul_small(static_cast<unsigned long long>(n - a + 1));
        c.div_small(static_cast<unsigned long long>(a));
        total.add(c);
    }
    return total;
}

inline BigCount pow2(int n) {
    BigCount b = BigCount::from_u64(1);
    for (int i = 0; i < n; ++i) b.mul_small(2);
    return b;
}

}  // namespace rtnep::detail
