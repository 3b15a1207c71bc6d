#include "hdcd/scan.hpp"

#include <stdexcept>
#include <string>

namespace hdcd {

namespace {

void check_split(const GramTable& gram, int m, int a, int b) {
    const int n = static_cast<int>(gram.size());
    if (a < 1 || b > n || a > m || m >= b) {
        throw std::domain_error("split (m,a,b) = (" + std::to_string(m) +
                                "," + std::to_string(a) + "," +
                                std::to_string(b) + ") out of range for n = " +
                                std::to_string(n));
    }
    if (m - a + 1 < 2) {
        throw std::domain_error("left block [" + std::to_string(a) + "," +
                                std::to_string(m) + "] shorter than 2");
    }
    if (b - m < 2) {
        throw std::domain_error("right block [" + std::to_string(m + 1) + "," +
                                std::to_string(b) + "] shorter than 2");
    }
}

double rescale_factor(int m, int a, int b) {
    const double len = b - a + 1;
    const double left = m - a + 1;
    const double right = b - m;
    return left * (left - 1.0) * right * (right - 1.0) / (len * len * len);
}

// Same as rescaled_g but without precondition checks, for the O(n^2) scans
// whose loop bounds already guarantee valid blocks.
double rescaled_unchecked(const GramTable& gram, int m, int a, int b) {
    const double left_len = m - a + 1;
    const double right_len = b - m;
    const double left =
        2.0 / (left_len * (left_len - 1.0)) * gram.within_pair_sum(a, m);
    const double right =
        2.0 / (right_len * (right_len - 1.0)) * gram.within_pair_sum(m + 1, b);
    const double cross =
        2.0 / (left_len * right_len) * gram.block_sum(a, m, m + 1, b);
    return rescale_factor(m, a, b) * (left + right - cross);
}

}  // namespace

double g_stat(const GramTable& gram, int m, int a, int b) {
    check_split(gram, m, a, b);
    const double left_len = m - a + 1;
    const double right_len = b - m;
    const double left =
        2.0 / (left_len * (left_len - 1.0)) * gram.within_pair_sum(a, m);
    const double right =
        2.0 / (right_len * (right_len - 1.0)) * gram.within_pair_sum(m + 1, b);
    const double cross =
        2.0 / (left_len * right_len) * gram.block_sum(a, m, m + 1, b);
    return left + right - cross;
}

double rescaled_g(const GramTable& gram, int m, int a, int b) {
    check_split(gram, m, a, b);
    return rescale_factor(m, a, b) * g_stat(gram, m, a, b);
}

ScanProfile single_scan(const GramTable& gram) {
    const int n = static_cast<int>(gram.size());
    if (n < 4) {
        throw std::domain_error("single scan requires n >= 4, got n = " +
                                std::to_string(n));
    }
    ScanProfile profile;
    profile.first = 2;
    profile.values.resize(n - 3);
    for (int m = 2; m <= n - 2; ++m) {
        const double v = rescaled_unchecked(gram, m, 1, n);
        profile.values(m - 2) = v;
        if (m == 2 || v > profile.max_value) {
            profile.max_value = v;
            profile.argmax = m;
        }
    }
    return profile;
}

MultiScanResult multi_scan(const GramTable& gram) {
    const int n = static_cast<int>(gram.size());
    if (n < 4) {
        throw std::domain_error("multi scan requires n >= 4, got n = " +
                                std::to_string(n));
    }
    MultiScanResult r;
    bool first = true;
    for (int m = 2; m <= n - 2; ++m) {
        for (int k = m + 2; k <= n; ++k) {
            const double v = rescaled_unchecked(gram, m, 1, k);
            if (first || v > r.forward.max_value) {
                r.forward.max_value = v;
                r.forward.argmax_m = m;
                r.forward.argmax_k = k;
                first = false;
            }
        }
    }
    first = true;
    for (int m = 2; m <= n - 2; ++m) {
        for (int k = 1; k <= m - 1; ++k) {
            const double v = rescaled_unchecked(gram, m, k, n);
            if (first || v > r.backward.max_value) {
                r.backward.max_value = v;
                r.backward.argmax_m = m;
                r.backward.argmax_k = k;
                first = false;
            }
        }
    }
    r.stat = r.forward.max_value + r.backward.max_value;
    return r;
}

IntervalScan interval_scan(const GramTable& gram, int s, int e) {
    const int n = static_cast<int>(gram.size());
    if (s < 1 || e > n || e - s < 4) {
        throw std::domain_error("interval (" + std::to_string(s) + "," +
                                std::to_string(e) +
                                ") too short for a scan (need e - s >= 4)");
    }
    IntervalScan best;
    for (int t = s + 2; t <= e - 2; ++t) {
        const double v = rescaled_unchecked(gram, t, s, e);
        if (t == s + 2 || v > best.w) {
            best.w = v;
            best.t_hat = t;
        }
    }
    return best;
}

}  // namespace hdcd
