#include "fgeom/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <climits>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fgeom::search {

namespace {

using Bits = std::vector<std::uint64_t>;
using Clock = std::chrono::steady_clock;

// Row bitsets for the span rule. The singular points of the hyperbolic
// solid <g, h> of two disjoint generators are covered by the q+1 transversal
// generators <x, x^perp meet h>, x on g, so the rows meeting <g, h> are the
// union of the rows meeting those transversals.
class SpanData {
public:
    SpanData(const Problem& P, const geom::QuadricTables& T) : P_(P), T_(T), words_((P.num_rows() + 63) / 64)
    {
        gen_rows_.assign(T.num_generators(), Bits(words_, 0));
        for (int r = 0; r < P.num_rows(); ++r)
            for (int x : T.generator_points(P.rows[r]))
                for (int g : T.generators_through(x))
                    gen_rows_[g][r / 64] |= std::uint64_t{1} << (r % 64);
        with_l_.resize(P.num_rows());
        for (int r = 0; r < P.num_rows(); ++r)
            with_l_[r] = meeting(P.l, P.rows[r]);
    }

    int words() const { return words_; }
    const Bits& with_l(int r) const { return with_l_[r]; }
    void add_pair(int a, int b, Bits& mask) const { meeting_into(P_.rows[a], P_.rows[b], mask); }

private:
    Bits meeting(int g, int h) const
    {
        Bits out(words_, 0);
        meeting_into(g, h, out);
        return out;
    }

    void meeting_into(int g, int h, Bits& out) const
    {
        const auto& Q = T_.form();
        for (int x : T_.generator_points(g)) {
            int y = -1;
            for (int c : T_.generator_points(h))
                if (Q.bhat(T_.point(x), T_.point(c)).v == 0) {
                    y = c;
                    break;
                }
            if (y < 0)
                throw std::logic_error("generators are not disjoint");
            const auto a = T_.generators_through(x);
            const auto b = T_.generators_through(y);
            int t = -1;
            std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), &t);
            if (t < 0)
                throw std::logic_error("no transversal generator");
            const auto& m = gen_rows_[t];
            for (int w = 0; w < words_; ++w)
                out[w] |= m[w];
        }
    }

    const Problem& P_;
    const geom::QuadricTables& T_;
    int words_;
    std::vector<Bits> gen_rows_;
    std::vector<Bits> with_l_;
};

void or_into(Bits& a, const Bits& b)
{
    for (std::size_t w = 0; w < a.size(); ++w)
        a[w] |= b[w];
}

struct Shared {
    std::atomic<bool> stop{false};
    std::atomic<bool> timed_out{false};
    std::atomic<int> best_branch{INT_MAX};
    Clock::time_point deadline;
    bool has_deadline = false;
};

struct Stats {
    long long nodes = 0, by_choice = 0, by_lone = 0, dead = 0;
};

enum class Why { Choice, Lone, Branch };

class Worker {
public:
    Worker(const Problem& P, const std::vector<SideConstraint>& exact, const SpanData* span, const SolveOptions& opt,
           Shared& sh)
        : P_(P), exact_(exact), span_(span), opt_(opt), sh_(sh)
    {
        const int n = P.num_rows();
        state_.assign(n, 0);
        count_.assign(P.num_cols(), 0);
        remain_.resize(P.num_cols());
        for (int c = 0; c < P.num_cols(); ++c)
            remain_[c] = static_cast<int>(P.col_rows[c].size());
        row_sides_.resize(n);
        scount_.assign(exact_.size(), 0);
        sremain_.resize(exact_.size());
        for (std::size_t s = 0; s < exact_.size(); ++s) {
            sremain_[s] = static_cast<int>(exact_[s].support.size());
            for (int r : exact_[s].support)
                row_sides_[r].push_back(static_cast<int>(s));
        }
        undecided_ = n;
        words_ = (n + 63) / 64;
        auto bits_of = [&](const std::vector<int>& rows) {
            Bits b(words_, 0);
            for (int x : rows)
                b[x / 64] |= std::uint64_t{1} << (x % 64);
            return b;
        };
        std::vector<int> all(n);
        for (int i = 0; i < n; ++i)
            all[i] = i;
        und_ = bits_of(all);
        for (const auto& rows : P.col_rows)
            col_bits_.push_back(bits_of(rows));
        for (const auto& c : exact_)
            side_bits_.push_back(bits_of(c.support));
    }

    // Candidates of the most constrained open requirement; empty with
    // `complete` set when every requirement is met.
    std::vector<int> branch_candidates(bool& complete) const
    {
        complete = false;
        int best_c = -1, best_size = INT_MAX;
        for (int c = 0; c < P_.num_cols(); ++c)
            if (count_[c] == 1 && remain_[c] < best_size) {
                best_size = remain_[c];
                best_c = c;
            }
        int best_s = -1;
        for (std::size_t s = 0; s < exact_.size(); ++s)
            if (scount_[s] < exact_[s].value && sremain_[s] < best_size) {
                best_size = sremain_[s];
                best_s = static_cast<int>(s);
            }
        std::vector<int> out;
        if (best_s >= 0) {
            for (int r : exact_[best_s].support)
                if (state_[r] == 0)
                    out.push_back(r);
        } else if (best_c >= 0) {
            for (int r : P_.col_rows[best_c])
                if (state_[r] == 0)
                    out.push_back(r);
        } else if (chosen_.size() < static_cast<std::size_t>(P_.cardinality)) {
            for (int r = 0; r < P_.num_rows(); ++r)
                if (state_[r] == 0)
                    out.push_back(r);
        } else {
            complete = true;
        }
        return out;
    }

    // Runs root branch `b` given the root candidate list.
    void run_branch(int b, const std::vector<int>& root)
    {
        branch_ = b;
        const std::size_t mark = trail_.size();
        for (int i = 0; i < b && !conflict_; ++i)
            exclude(root[i], Why::Branch);
        if (!conflict_) {
            choose(root[b]);
            if (!conflict_)
                dfs();
        }
        undo(mark);
    }

    Stats stats;
    std::vector<std::vector<int>> solutions;

private:
    bool aborted()
    {
        if (sh_.stop.load(std::memory_order_relaxed))
            return true;
        if (opt_.mode != Mode::All && branch_ > sh_.best_branch.load(std::memory_order_relaxed))
            return true;
        if (sh_.has_deadline && (stats.nodes & 1023) == 0 && Clock::now() > sh_.deadline) {
            sh_.timed_out = true;
            sh_.stop = true;
            return true;
        }
        return false;
    }

    // Returns true when the search of this branch must end.
    bool dfs()
    {
        ++stats.nodes;
        if (aborted())
            return true;
        if (chosen_.size() + undecided_ < static_cast<std::size_t>(P_.cardinality))
            return false;
        bool complete = false;
        const auto cands = branch_candidates(complete);
        if (complete) {
            auto s = chosen_;
            std::sort(s.begin(), s.end());
            solutions.push_back(std::move(s));
            if (opt_.mode != Mode::All) {
                int cur = sh_.best_branch.load();
                while (branch_ < cur && !sh_.best_branch.compare_exchange_weak(cur, branch_)) {
                }
                return true;
            }
            return false;
        }
        if (chosen_.size() >= static_cast<std::size_t>(P_.cardinality))
            return false;
        const std::size_t outer = trail_.size();
        bool done = false;
        for (int r : cands) {
            const std::size_t mark = trail_.size();
            choose(r);
            if (!conflict_)
                done = dfs();
            undo(mark);
            if (done)
                break;
            exclude(r, Why::Branch);
            if (conflict_)
                break;
        }
        undo(outer);
        return done;
    }

    void exclude(int r, Why why)
    {
        exclude_one(r, why);
        drain();
    }

    // A column with nothing chosen and a single candidate left can never
    // reach two, so that candidate goes too.
    void drain()
    {
        while (!pending_.empty() && !conflict_) {
            const int x = pending_.back();
            pending_.pop_back();
            exclude_one(x, Why::Lone);
        }
    }

    void exclude_one(int r, Why why)
    {
        if (state_[r] != 0)
            return;
        state_[r] = -1;
        --undecided_;
        und_[r / 64] &= ~(std::uint64_t{1} << (r % 64));
        trail_.push_back(~r);
        switch (why) {
        case Why::Choice: ++stats.by_choice; break;
        case Why::Lone: ++stats.by_lone; break;
        case Why::Branch: break;
        }
        for (int c : P_.row_cols[r]) {
            --remain_[c];
            if (remain_[c] == 0 && count_[c] == 1) {
                ++stats.dead;
                conflict_ = true;
            } else if (remain_[c] == 1 && count_[c] == 0) {
                for (int x : P_.col_rows[c])
                    if (state_[x] == 0) {
                        pending_.push_back(x);
                        break;
                    }
            }
        }
        for (int s : row_sides_[r])
            if (scount_[s] + --sremain_[s] < exact_[s].value)
                conflict_ = true;
    }

    void choose(int r)
    {
        state_[r] = 1;
        --undecided_;
        und_[r / 64] &= ~(std::uint64_t{1} << (r % 64));
        trail_.push_back(r);
        chosen_.push_back(r);
        for (int c : P_.row_cols[r]) {
            --remain_[c];
            if (++count_[c] > 2)
                conflict_ = true;
        }
        for (int s : row_sides_[r]) {
            --sremain_[s];
            if (++scount_[s] > exact_[s].value)
                conflict_ = true;
        }
        if (chosen_.size() > static_cast<std::size_t>(P_.cardinality))
            conflict_ = true;
        if (conflict_)
            return;
        // everything this choice rules out, gathered first so that the
        // exclusions can stop at the first conflict
        Bits kill(words_, 0);
        for (int c : P_.row_cols[r]) {
            if (count_[c] == 2) {
                or_into(kill, col_bits_[c]);
            } else if (count_[c] == 1 && remain_[c] == 0) {
                ++stats.dead;
                conflict_ = true;
                return;
            }
        }
        for (int s : row_sides_[r])
            if (scount_[s] == exact_[s].value)
                or_into(kill, side_bits_[s]);
        if (span_) {
            or_into(kill, span_->with_l(r));
            for (int a : chosen_)
                if (a != r)
                    span_->add_pair(a, r, kill);
        }
        for (int w = 0; w < words_ && !conflict_; ++w)
            for (std::uint64_t bits = kill[w] & und_[w]; bits && !conflict_; bits &= bits - 1)
                exclude_one(w * 64 + std::countr_zero(bits), Why::Choice);
        drain();
    }

    void undo(std::size_t mark)
    {
        while (trail_.size() > mark) {
            const int e = trail_.back();
            trail_.pop_back();
            if (e >= 0) {
                state_[e] = 0;
                ++undecided_;
                und_[e / 64] |= std::uint64_t{1} << (e % 64);
                chosen_.pop_back();
                for (int c : P_.row_cols[e]) {
                    ++remain_[c];
                    --count_[c];
                }
                for (int s : row_sides_[e]) {
                    ++sremain_[s];
                    --scount_[s];
                }
            } else {
                const int r = ~e;
                state_[r] = 0;
                ++undecided_;
                und_[r / 64] |= std::uint64_t{1} << (r % 64);
                for (int c : P_.row_cols[r])
                    ++remain_[c];
                for (int s : row_sides_[r])
                    ++sremain_[s];
            }
        }
        pending_.clear();
        conflict_ = false;
    }

    const Problem& P_;
    const std::vector<SideConstraint>& exact_;
    const SpanData* span_;
    const SolveOptions& opt_;
    Shared& sh_;
    std::vector<std::int8_t> state_;
    std::vector<int> count_, remain_;
    std::vector<int> scount_, sremain_;
    std::vector<std::vector<int>> row_sides_;
    std::vector<int> chosen_;
    std::vector<int> trail_;
    std::vector<int> pending_;
    int words_ = 0;
    Bits und_;
    std::vector<Bits> col_bits_, side_bits_;
    std::size_t undecided_ = 0;
    bool conflict_ = false;
    int branch_ = 0;
};

std::string term_lines(const std::vector<std::string>& terms)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        if (i && i % 10 == 0)
            os << "\n   ";
        os << (i == 0 && terms[i][0] == '+' ? terms[i].substr(2) : terms[i]);
        if (i + 1 < terms.size())
            os << ' ';
    }
    return os.str();
}

} // namespace

int Problem::row_of(int generator) const
{
    const auto it = std::lower_bound(rows.begin(), rows.end(), generator);
    return it != rows.end() && *it == generator ? static_cast<int>(it - rows.begin()) : -1;
}

Problem build_problem(const geom::QuadricTables& T, int l, std::vector<SideConstraint> sides)
{
    Problem P;
    P.q = T.q();
    P.l = l;
    P.rows = T.disjoint_from(l);
    for (int p = 0; p < T.num_poles(); ++p)
        if (!T.in_hyperplane(p, l))
            P.cols.push_back(p);
    P.row_cols.resize(P.rows.size());
    P.col_rows.resize(P.cols.size());
    for (int r = 0; r < P.num_rows(); ++r)
        for (int p : T.hyperplanes_containing(P.rows[r])) {
            const auto it = std::lower_bound(P.cols.begin(), P.cols.end(), p);
            if (it == P.cols.end() || *it != p)
                continue;
            const int c = static_cast<int>(it - P.cols.begin());
            P.row_cols[r].push_back(c);
            P.col_rows[c].push_back(r);
        }
    P.cardinality = P.q * P.q;
    P.sides = std::move(sides);
    return P;
}

Problem restrict_rows(const Problem& P, const std::vector<int>& keep)
{
    auto sorted = keep;
    std::sort(sorted.begin(), sorted.end());
    std::vector<int> new_index(P.num_rows(), -1);
    Problem R;
    R.q = P.q;
    R.l = P.l;
    R.cardinality = P.cardinality;
    for (int r : sorted) {
        new_index[r] = static_cast<int>(R.rows.size());
        R.rows.push_back(P.rows[r]);
    }
    R.row_cols.resize(R.rows.size());
    for (int c = 0; c < P.num_cols(); ++c) {
        std::vector<int> members;
        for (int r : P.col_rows[c])
            if (new_index[r] >= 0)
                members.push_back(new_index[r]);
        if (members.empty())
            continue;
        const int nc = static_cast<int>(R.cols.size());
        R.cols.push_back(P.cols[c]);
        for (int r : members)
            R.row_cols[r].push_back(nc);
        R.col_rows.push_back(std::move(members));
    }
    for (const auto& s : P.sides) {
        SideConstraint t{{}, s.value, s.label};
        for (int r : s.support)
            if (new_index[r] >= 0)
                t.support.push_back(new_index[r]);
        R.sides.push_back(std::move(t));
    }
    return R;
}

SideConstraint uset_constraint(const Problem& P, const std::vector<int>& O1, const std::vector<int>& O2,
                               std::string label)
{
    SideConstraint s;
    s.value = 1;
    s.label = std::move(label);
    for (const auto* O : {&O1, &O2})
        for (int g : *O) {
            const int r = P.row_of(g);
            if (r < 0)
                throw std::invalid_argument("U-set line is not a row of the problem");
            s.support.push_back(r);
        }
    std::sort(s.support.begin(), s.support.end());
    return s;
}

const char* to_string(Status s)
{
    switch (s) {
    case Status::Feasible: return "feasible";
    case Status::Infeasible: return "infeasible";
    case Status::Timeout: return "timeout";
    }
    return "?";
}

const char* to_string(Mode m)
{
    switch (m) {
    case Mode::First: return "first";
    case Mode::All: return "all";
    case Mode::ProveInfeasible: return "prove-infeasible";
    }
    return "?";
}

SearchReport solve(const Problem& P, const geom::QuadricTables* T, const SolveOptions& opt)
{
    const auto start = Clock::now();
    std::unique_ptr<SpanData> span;
    if (T && opt.span_pruning && P.l >= 0)
        span = std::make_unique<SpanData>(P, *T);
    std::vector<SideConstraint> exact = P.sides;
    if (T && opt.l_hyperplanes && P.l >= 0)
        for (int p = 0; p < T->num_poles(); ++p) {
            if (!T->in_hyperplane(p, P.l))
                continue;
            SideConstraint c{{}, 1, "l-hyperplane " + std::to_string(p)};
            for (int r = 0; r < P.num_rows(); ++r)
                if (T->in_hyperplane(p, P.rows[r]))
                    c.support.push_back(r);
            exact.push_back(std::move(c));
        }
    Shared sh;
    if (opt.timeout > 0) {
        sh.has_deadline = true;
        sh.deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(opt.timeout));
    }
    SearchReport rep;

    Worker probe(P, exact, span.get(), opt, sh);
    bool complete = false;
    auto root = probe.branch_candidates(complete);
    if (complete) {
        // nothing to choose: the empty assignment is the only candidate
        rep.solutions.push_back({});
        rep.status = Status::Feasible;
        rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();
        return rep;
    }
    if (opt.symmetry && root.size() > 1)
        root.resize(1);
    if (!opt.root_orbits.empty() && opt.mode != Mode::All && !opt.symmetry) {
        std::vector<int> all, reps;
        for (const auto& o : opt.root_orbits) {
            if (o.empty())
                continue;
            all.insert(all.end(), o.begin(), o.end());
            reps.push_back(o.front());
        }
        auto sorted_root = root;
        std::sort(all.begin(), all.end());
        std::sort(sorted_root.begin(), sorted_root.end());
        if (all == sorted_root) {
            std::erase_if(root, [&](int r) { return std::find(reps.begin(), reps.end(), r) == reps.end(); });
            rep.orbits_used = true;
        }
    }
    rep.root_branches = static_cast<int>(root.size());

    std::vector<char> skip(root.size(), 0);
    for (int b : opt.skip_branches)
        if (b >= 0 && b < static_cast<int>(root.size()))
            skip[b] = 1;

    std::atomic<int> next{0};
    std::mutex mu;
    std::vector<std::pair<int, std::vector<std::vector<int>>>> found;
    std::vector<int> exhausted;
    Stats total;
    auto work = [&] {
        Worker w(P, exact, span.get(), opt, sh);
        for (;;) {
            const int b = next++;
            if (b >= static_cast<int>(root.size()) || sh.stop)
                break;
            if (skip[b])
                continue;
            if (opt.mode != Mode::All && b > sh.best_branch)
                continue;
            w.solutions.clear();
            w.run_branch(b, root);
            const bool finished = !sh.stop;
            std::lock_guard<std::mutex> lock(mu);
            if (!w.solutions.empty())
                found.emplace_back(b, w.solutions);
            if (finished) {
                exhausted.push_back(b);
                if (opt.on_branch_done)
                    opt.on_branch_done(b);
            }
        }
        std::lock_guard<std::mutex> lock(mu);
        total.nodes += w.stats.nodes;
        total.by_choice += w.stats.by_choice;
        total.by_lone += w.stats.by_lone;
        total.dead += w.stats.dead;
    };
    const int threads = std::max(1, std::min<int>(opt.threads, static_cast<int>(root.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < threads; ++t)
        pool.emplace_back(work);
    work();
    for (auto& th : pool)
        th.join();

    std::sort(found.begin(), found.end());
    if (opt.mode == Mode::All) {
        for (auto& [b, sols] : found)
            for (auto& s : sols)
                rep.solutions.push_back(std::move(s));
        std::sort(rep.solutions.begin(), rep.solutions.end());
    } else if (!found.empty()) {
        rep.solutions.push_back(found.front().second.front());
    }
    std::sort(exhausted.begin(), exhausted.end());
    for (int b = 0; b < static_cast<int>(root.size()); ++b)
        if (skip[b])
            exhausted.push_back(b);
    std::sort(exhausted.begin(), exhausted.end());
    rep.exhausted_branches = exhausted;
    rep.nodes = total.nodes;
    rep.excluded_by_choice = total.by_choice;
    rep.excluded_lone = total.by_lone;
    rep.dead_columns = total.dead;
    if (!rep.solutions.empty() && (opt.mode != Mode::All || !sh.timed_out))
        rep.status = Status::Feasible;
    else if (sh.timed_out)
        rep.status = Status::Timeout;
    else
        rep.status = Status::Infeasible;
    rep.seconds = std::chrono::duration<double>(Clock::now() - start).count();
    return rep;
}

std::vector<std::vector<int>> reference_enumerate(const Problem& P)
{
    std::vector<std::vector<int>> out;
    std::vector<int> count(P.num_cols(), 0), scount(P.sides.size(), 0), chosen;
    std::vector<std::vector<int>> row_sides(P.num_rows());
    for (std::size_t s = 0; s < P.sides.size(); ++s)
        for (int r : P.sides[s].support)
            row_sides[r].push_back(static_cast<int>(s));
    auto rec = [&](auto&& self, int next) -> void {
        if (static_cast<int>(chosen.size()) == P.cardinality) {
            if (satisfies(P, chosen))
                out.push_back(chosen);
            return;
        }
        for (int r = next; r + (P.cardinality - static_cast<int>(chosen.size())) <= P.num_rows(); ++r) {
            bool ok = true;
            for (int c : P.row_cols[r])
                ok = ok && count[c] < 2;
            for (int s : row_sides[r])
                ok = ok && scount[s] < P.sides[s].value;
            if (!ok)
                continue;
            for (int c : P.row_cols[r])
                ++count[c];
            for (int s : row_sides[r])
                ++scount[s];
            chosen.push_back(r);
            self(self, r + 1);
            chosen.pop_back();
            for (int c : P.row_cols[r])
                --count[c];
            for (int s : row_sides[r])
                --scount[s];
        }
    };
    rec(rec, 0);
    return out;
}

bool satisfies(const Problem& P, const std::vector<int>& x)
{
    if (static_cast<int>(x.size()) != P.cardinality)
        return false;
    std::vector<int> count(P.num_cols(), 0);
    std::vector<char> in(P.num_rows(), 0);
    for (int r : x) {
        if (r < 0 || r >= P.num_rows() || in[r])
            return false;
        in[r] = 1;
        for (int c : P.row_cols[r])
            ++count[c];
    }
    for (int c : count)
        if (c != 0 && c != 2)
            return false;
    for (const auto& s : P.sides) {
        int k = 0;
        for (int r : s.support)
            k += in[r];
        if (k != s.value)
            return false;
    }
    return true;
}

SolutionReport verify_solution(const Context& ctx, const Problem& P, const std::vector<int>& x)
{
    if (P.l < 0)
        throw std::invalid_argument("problem carries no geometry");
    SolutionReport r;
    r.cardinality_ok = static_cast<int>(x.size()) == P.q * P.q;
    if (!r.cardinality_ok)
        throw std::invalid_argument("solution does not have q^2 lines");
    std::vector<int> S{P.l};
    for (int i : x)
        S.push_back(P.rows.at(i));
    r.oval = oval::verify(ctx, S, true);
    r.spans = r.oval.any_three_span;
    r.zero_or_two = r.oval.zero_or_two;
    r.agree = r.spans == r.zero_or_two;
    r.pseudo_conic = r.oval.pseudo_conic && r.oval.conic_tests_agree;
    r.passed = r.cardinality_ok && r.spans && r.zero_or_two && r.agree;
    return r;
}

std::string export_lp(const Problem& P)
{
    std::ostringstream os;
    os << "\\ Pseudo-oval feasibility model, q = " << P.q << ", " << P.num_rows() << " x variables, "
       << P.num_cols() << " y variables\n";
    os << "\\ Maximise: 0\n";
    os << "Maximize\n obj: 0 x0\n";
    os << "Subject To\n";
    for (int c = 0; c < P.num_cols(); ++c) {
        std::vector<std::string> terms;
        for (int r : P.col_rows[c])
            terms.push_back("+ x" + std::to_string(r));
        terms.push_back("- 2 y" + std::to_string(c));
        os << " h" << c << ": " << term_lines(terms) << " = 0\n";
    }
    {
        std::vector<std::string> terms;
        for (int r = 0; r < P.num_rows(); ++r)
            terms.push_back("+ x" + std::to_string(r));
        os << " card: " << term_lines(terms) << " = " << P.cardinality << "\n";
    }
    for (std::size_t s = 0; s < P.sides.size(); ++s) {
        std::vector<std::string> terms;
        for (int r : P.sides[s].support)
            terms.push_back("+ x" + std::to_string(r));
        os << " side" << s << ": " << term_lines(terms) << " = " << P.sides[s].value << "\n";
    }
    os << "Binary\n";
    std::vector<std::string> names;
    for (int r = 0; r < P.num_rows(); ++r)
        names.push_back("x" + std::to_string(r));
    for (int c = 0; c < P.num_cols(); ++c)
        names.push_back("y" + std::to_string(c));
    for (std::size_t i = 0; i < names.size(); ++i)
        os << (i % 16 == 0 ? " " : "") << names[i] << (i % 16 == 15 || i + 1 == names.size() ? "\n" : " ");
    os << "End\n";
    return os.str();
}

LpModel parse_lp(const std::string& text)
{
    enum class Sec { None, Objective, Constraints, Binary, End };
    LpModel m;
    Sec sec = Sec::None;
    std::istringstream in(text);
    std::string line;
    std::vector<std::string> objective;
    std::vector<std::pair<std::string, std::vector<std::string>>> cons;
    auto lower = [](std::string s) {
        std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return std::tolower(c); });
        return s;
    };
    while (std::getline(in, line)) {
        const auto cut = line.find('\\');
        if (cut != std::string::npos)
            line.resize(cut);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;)
            tok.push_back(t);
        if (tok.empty())
            continue;
        const std::string head = lower(tok[0]);
        if (head == "maximize" || head == "maximise" || head == "minimize" || head == "minimise") {
            sec = Sec::Objective;
            continue;
        }
        if (head == "subject" || head == "st" || head == "s.t.") {
            sec = Sec::Constraints;
            continue;
        }
        if (head == "binary" || head == "binaries") {
            sec = Sec::Binary;
            continue;
        }
        if (head == "end") {
            sec = Sec::End;
            continue;
        }
        switch (sec) {
        case Sec::Objective: objective.insert(objective.end(), tok.begin(), tok.end()); break;
        case Sec::Constraints:
            for (auto& t : tok) {
                if (t.back() == ':') {
                    cons.push_back({t.substr(0, t.size() - 1), {}});
                    continue;
                }
                if (cons.empty())
                    throw std::runtime_error("constraint term before any constraint name");
                cons.back().second.push_back(t);
            }
            break;
        case Sec::Binary: m.binaries += static_cast<int>(tok.size()); break;
        case Sec::None:
        case Sec::End: throw std::runtime_error("text outside of any LP section: " + line);
        }
    }
    if (sec != Sec::End)
        throw std::runtime_error("missing End");

    m.constant_objective = true;
    for (auto& t : objective) {
        if (t.back() == ':' || t == "+" || t == "-" || t[0] == 'x' || t[0] == 'y')
            continue;
        if (std::stod(t) != 0)
            m.constant_objective = false;
    }

    auto var_index = [](const std::string& t, char kind) {
        if (t.size() < 2 || t[0] != kind)
            throw std::runtime_error("unexpected variable " + t);
        return std::stoi(t.substr(1));
    };
    std::map<int, std::vector<int>> columns;
    for (auto& [name, terms] : cons) {
        // terms: [sign] [coef] var ... = rhs
        std::vector<std::pair<long, std::string>> lin;
        long rhs = 0;
        long sign = 1, coef = 1;
        for (std::size_t i = 0; i < terms.size(); ++i) {
            const auto& t = terms[i];
            if (t == "+") {
                sign = 1;
            } else if (t == "-") {
                sign = -1;
            } else if (t == "=") {
                if (i + 2 != terms.size())
                    throw std::runtime_error("malformed right-hand side in " + name);
                rhs = std::stol(terms[i + 1]);
                break;
            } else if (std::isdigit(static_cast<unsigned char>(t[0]))) {
                coef = std::stol(t);
            } else {
                lin.push_back({sign * coef, t});
                sign = 1;
                coef = 1;
            }
        }
        std::vector<int> xs;
        int y = -1;
        for (auto& [c, v] : lin) {
            if (v[0] == 'x' && c == 1)
                xs.push_back(var_index(v, 'x'));
            else if (v[0] == 'y' && c == -2)
                y = var_index(v, 'y');
            else
                throw std::runtime_error("unexpected term in " + name);
        }
        for (int x : xs)
            m.num_x = std::max(m.num_x, x + 1);
        if (y >= 0) {
            if (rhs != 0)
                throw std::runtime_error("column constraint with nonzero right-hand side");
            columns[y] = xs;
            m.num_y = std::max(m.num_y, y + 1);
        } else if (name == "card") {
            m.cardinality = static_cast<int>(rhs);
        } else {
            m.sides.push_back({xs, static_cast<int>(rhs), name});
        }
    }
    for (auto& [y, xs] : columns) {
        if (y != static_cast<int>(m.columns.size()))
            throw std::runtime_error("column constraints are not contiguous");
        m.columns.push_back(xs);
    }
    if (m.cardinality < 0)
        throw std::runtime_error("missing cardinality constraint");
    return m;
}

Problem problem_from_lp(const LpModel& m, int q)
{
    Problem P;
    P.q = q;
    P.cardinality = m.cardinality;
    for (int i = 0; i < m.num_x; ++i)
        P.rows.push_back(i);
    P.row_cols.resize(m.num_x);
    for (std::size_t c = 0; c < m.columns.size(); ++c) {
        P.cols.push_back(static_cast<int>(c));
        P.col_rows.push_back(m.columns[c]);
        std::sort(P.col_rows.back().begin(), P.col_rows.back().end());
        for (int r : m.columns[c])
            P.row_cols[r].push_back(static_cast<int>(c));
    }
    P.sides = m.sides;
    return P;
}

} // namespace fgeom::search
