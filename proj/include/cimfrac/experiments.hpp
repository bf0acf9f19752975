#pragma once

#include <optional>
#include <string>
#include <vector>

#include "cimfrac/cim.hpp"

namespace cimfrac {

enum class CaseId {
    scalar_ex1,
    homog_1d_ex2,
    homog_2d_ex2,
    nonhomog_1d_ex3,
    nonhomog_2d_ex3,
    nonsmooth_1d_ex4,
};

CaseId parse_case_id(const std::string& name);
std::string case_name(CaseId id);

/// One of the four experiment families, with its window, table time and
/// ground-truth policy fixed to the reference experiment setup.
struct ExperimentCase {
    CaseId id;
    FractionalOrders orders;
    int dimension;       ///< 0 scalar, 1 interval, 2 unit square
    double theta;
    double t0;
    double lambda;
    double table_time;   ///< the t the reference error tables quote
    int n_ref;           ///< reference node count
    bool exact_for_spatial;  ///< spatial tables compare against the exact solution
    double lift;         ///< constant added back when reporting the solution

    /// Exact solution where one exists (lift included); valid only when
    /// exact_for_spatial or id == scalar_ex1.
    double exact_value(double x, double t) const;
    double exact_scalar(double t) const;
};

/// Case with the reference-experiment defaults; alpha/beta free, epsilon optional.
ExperimentCase make_case(CaseId id, double alpha, double beta,
                         std::optional<double> epsilon = std::nullopt);

struct RunOptions {
    int threads = 0;     ///< 0 = all cores
    int n_cheb = 0;      ///< 0 = acceleration off
    std::string cache_dir;  ///< empty = CIM_CACHE_DIR or ./cim-cache
    bool verbose = false;
    bool use_cache = true;
    /// Ground truth for reference-based spatial tables: when true, use the
    /// Richardson combination of the reference and its parent mesh, which
    /// removes the O(h_ref^2) reference error from the measured orders.
    bool extrapolate_reference = false;
};

/// Counters observable through --verbose.
struct RunStats {
    long node_solves = 0;
    long cache_hits = 0;
    long cache_writes = 0;
};

/// Full pipeline at one (N, h): plan, mesh, data projection, node solves,
/// evaluation at the requested times.  Scalar case: each sample holds one
/// value.  The lift (Example 4) is added to the returned samples.
std::vector<TimeSample> run_case(const ExperimentCase& cs, int n_nodes,
                                 double h, const std::vector<double>& times,
                                 const RunOptions& opts = {},
                                 RunStats* stats = nullptr);

struct ErrorRow {
    std::string param;   ///< "40" or "1/32"
    double error;        ///< Err_tau (window max) or Err_h(t)
    std::optional<double> order;
    std::optional<double> error_at_table_t;  ///< temporal tables only
};

struct ErrorTable {
    std::string case_id;
    double alpha, beta, t, lambda;
    std::string fixed;  ///< "h=1/128" or "N=200"
    std::vector<ErrorRow> rows;
};

/// Err_tau(N) = max over the sampled window of the L2 difference from the
/// ground truth at the same h (the N_ref-node reference, or the exact
/// solution for the scalar case).  Window sampling: the table t plus 16
/// uniform points in [t0, lambda*t0].
ErrorTable temporal_error_table(const ExperimentCase& cs,
                                const std::vector<int>& n_values, double h,
                                const RunOptions& opts = {},
                                RunStats* stats = nullptr);

/// Err_h at the case's table time for each h, with the measured order.
/// Exact-solution cases integrate the error by element quadrature; the rest
/// compare against a fine reference (h_ref) after nodal prolongation.
ErrorTable spatial_error_table(const ExperimentCase& cs,
                               const std::vector<double>& h_values,
                               int n_nodes, double h_ref,
                               const RunOptions& opts = {},
                               RunStats* stats = nullptr);

/// Reference samples at (n_ref, h), persisted in the cache directory. Reload
/// is bit-exact.  Samples are in the lifted (reported) frame.
std::vector<TimeSample> reference_solution(const ExperimentCase& cs, int n_ref,
                                           double h,
                                           const std::vector<double>& times,
                                           const RunOptions& opts = {},
                                           RunStats* stats = nullptr);

/// Times used for Err_tau: 16 uniform window points plus the table time.
std::vector<double> window_times(const ExperimentCase& cs);

std::string table_to_csv(const ErrorTable& table);
void write_csv(const ErrorTable& table, const std::string& path);

/// Built-in property suite (criterion-style checks that need no caches).
struct PropertyResult {
    std::string name;
    bool passed;
    double measured;  ///< worst observed value, for reporting
    std::string detail;
};

std::vector<PropertyResult> run_property_checks();

}  // namespace cimfrac
