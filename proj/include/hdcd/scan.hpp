#pragma once

#include <utility>

#include "hdcd/gram.hpp"

namespace hdcd {

/// Evaluated single-split statistic surface over the candidate range.
struct ScanProfile {
    int first = 0;      // candidate index of values(0)
    VectorXd values;    // values(i) is the statistic at split first + i
    double max_value = 0.0;
    int argmax = 0;     // smallest maximizing split
};

/// Maximum of a pair-indexed scan; the full surface is not retained.
struct PairScan {
    double max_value = 0.0;
    int argmax_m = 0;  // lexicographically smallest maximizing (m, k)
    int argmax_k = 0;
};

struct MultiScanResult {
    double stat = 0.0;  // forward.max_value + backward.max_value
    PairScan forward;
    PairScan backward;
};

struct IntervalScan {
    double w = 0.0;  // max of the rescaled statistic over the interval
    int t_hat = 0;   // smallest maximizing split
};

/// Two-sample U-statistic for a split at m within [a, b]: average pairwise
/// inner products within each block minus twice the cross-block average.
/// Both blocks must contain at least two points. O(1) via prefix sums.
double g_stat(const GramTable& gram, int m, int a, int b);

/// g_stat scaled by (m-a+1)(m-a)(b-m)(b-m-1) / (b-a+1)^3.
double rescaled_g(const GramTable& gram, int m, int a, int b);

/// Rescaled statistic over m = 2..n-2; max_value is the single-change test
/// statistic. Requires n >= 4.
ScanProfile single_scan(const GramTable& gram);

/// Forward scan max over prefixes [1,k] plus backward scan max over
/// suffixes [k,n]; stat is the multiple-change test statistic. O(n^2).
MultiScanResult multi_scan(const GramTable& gram);

/// Max of the rescaled statistic over t = s+2..e-2 on the interval [s, e].
/// Requires e - s >= 4.
IntervalScan interval_scan(const GramTable& gram, int s, int e);

}  // namespace hdcd
