#pragma once

#include <array>
#include <string>
#include <vector>

#include "cnl/generate.hpp"

namespace cnl {

// Discretization grid: sigma x U x eps with L = 1, reporting the number of
// generated sub-intervals per cell.
struct Table1 {
    std::vector<double> sigmas{0.2, 0.3, 0.5, 0.7, 0.9};
    std::vector<double> uppers{5.0, 10.0, 15.0};
    std::vector<double> epsilons{0.1, 0.05, 0.01, 0.005, 0.001};
    // cells[e][s * uppers.size() + u]
    std::vector<std::vector<int>> cells;
};

Table1 reproduce_table1();
std::string table1_text(const Table1& table);
std::string table1_csv(const Table1& table);

// Guarantee sweep. Per instance and guarantee level, runs the exact search
// (the oracle), the exact-approx search (the MILP-equivalent path) and the
// Dinkelbach bisection, then records gaps against the exact optimum and the
// Theorem-2 certificate.
struct BenchRow {
    std::string instance_id;
    std::string variant;
    int m = 0;
    int N = 0;
    int guarantee = 0;   // percent
    double eps = 0.0;
    std::string method;
    double f_exact_opt = 0.0;
    double f_returned = 0.0;
    double gap_pct = 0.0;
    int k_total = 0;
    double wall_ms = 0.0;
    bool certificate_ok = true;
};

struct BenchResult {
    std::vector<BenchRow> rows;
    int certificate_violations = 0;
};

// eps per path and guarantee level: the bisection budget reserves part of the
// factor for its own tolerance, hence the slightly smaller values.
double eps_for_guarantee_approx(int guarantee_pct);     // 0.0526 / 0.0256 / 0.005
double eps_for_guarantee_bisection(int guarantee_pct);  // 0.0521 / 0.0251 / 0.0045

BenchResult bench_guarantees(const std::vector<GenSpec>& batch,
                             const std::vector<int>& guarantees, double bisection_delta = 0.001,
                             int jobs = 1);

std::string bench_csv(const BenchResult& result);

}  // namespace cnl
