#pragma once

#include "fgeom/context.hpp"
#include "fgeom/oval.hpp"

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace fgeom::search {

/// sum over support of x_i = value, support given as row indices.
struct SideConstraint {
    std::vector<int> support;
    int value = 1;
    std::string label;
};

/// x M = 2y with sum x = cardinality: rows are the generators disjoint from
/// l, columns the non-degenerate hyperplanes not containing l.
struct Problem {
    int q = 0;
    int l = -1;
    std::vector<int> rows;
    std::vector<int> cols;
    std::vector<std::vector<int>> row_cols;
    std::vector<std::vector<int>> col_rows;
    int cardinality = 0;
    std::vector<SideConstraint> sides;

    int num_rows() const { return static_cast<int>(rows.size()); }
    int num_cols() const { return static_cast<int>(cols.size()); }
    /// Row index of a generator id, -1 when absent.
    int row_of(int generator) const;
};

Problem build_problem(const geom::QuadricTables& T, int l, std::vector<SideConstraint> sides = {});

/// The instance restricted to the given rows (columns that lose every row are
/// dropped); side constraints are restricted too.
Problem restrict_rows(const Problem& P, const std::vector<int>& keep);

/// Side constraint sum_{i in U} x_i = 1 of a U-set.
SideConstraint uset_constraint(const Problem& P, const std::vector<int>& O1, const std::vector<int>& O2,
                               std::string label);

enum class Mode { First, All, ProveInfeasible };
enum class Status { Feasible, Infeasible, Timeout };
const char* to_string(Status s);
const char* to_string(Mode m);

struct SolveOptions {
    Mode mode = Mode::All;
    /// Wall-clock budget in seconds; 0 means none.
    double timeout = 0;
    int threads = 1;
    /// Exclude rows meeting <a, b> for chosen a, b (and for a with l).
    bool span_pruning = true;
    /// Each non-degenerate hyperplane through l holds exactly one chosen row.
    bool l_hyperplanes = true;
    /// Only the first root branch (the stabilizer of l is transitive on rows).
    bool symmetry = false;
    /// Orbits (as row indices) of a group preserving the instance. When they
    /// partition the root candidates exactly, only the first row of each
    /// orbit is branched on; otherwise they are ignored. Not for Mode::All.
    std::vector<std::vector<int>> root_orbits;
    /// Root branches already exhausted by an earlier run.
    std::vector<int> skip_branches;
    /// Called after each root branch is exhausted, from the worker thread.
    std::function<void(int)> on_branch_done;
};

struct SearchReport {
    Status status = Status::Infeasible;
    /// Sorted row-index sets, sorted lexicographically.
    std::vector<std::vector<int>> solutions;
    long long nodes = 0;
    double seconds = 0;
    int root_branches = 0;
    /// Whether root_orbits were applied.
    bool orbits_used = false;
    std::vector<int> exhausted_branches;
    /// Rows ruled out as consequences of a choice (full columns, saturated
    /// side constraints, span rule).
    long long excluded_by_choice = 0;
    /// Rows ruled out as the lone candidate of an empty column.
    long long excluded_lone = 0;
    long long dead_columns = 0;
};

/// Needs the tables only for span pruning; pass nullptr to disable it.
SearchReport solve(const Problem& P, const geom::QuadricTables* T, const SolveOptions& opt);

/// Plain enumeration of cardinality-subsets, cut only when a column exceeds
/// two chosen rows or a side constraint is exceeded.
std::vector<std::vector<int>> reference_enumerate(const Problem& P);

/// Whether x (row indices) satisfies every constraint of P.
bool satisfies(const Problem& P, const std::vector<int>& x);

struct SolutionReport {
    bool cardinality_ok = false;
    oval::OvalReport oval;
    /// (a) any three of S = x u {l} span.
    bool spans = false;
    /// (b) every non-degenerate hyperplane holds 0 or 2 members of S.
    bool zero_or_two = false;
    /// (c) the two agree.
    bool agree = false;
    /// (d) pseudo-conic by both tests.
    bool pseudo_conic = false;
    bool passed = false;
};
SolutionReport verify_solution(const Context& ctx, const Problem& P, const std::vector<int>& x);

/// CPLEX LP text of the model.
std::string export_lp(const Problem& P);

struct LpModel {
    int num_x = 0, num_y = 0;
    /// Column constraints as x indices with -2 y_j.
    std::vector<std::vector<int>> columns;
    int cardinality = -1;
    std::vector<SideConstraint> sides;
    bool constant_objective = false;
    int binaries = 0;
};
/// Parses exports of export_lp; throws std::runtime_error on malformed text.
LpModel parse_lp(const std::string& text);
/// Problem with the rows and columns of the LP (geometry ids left empty).
Problem problem_from_lp(const LpModel& m, int q);

} // namespace fgeom::search
