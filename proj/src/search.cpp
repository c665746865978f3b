#include "mgen/search.hpp"

#include <algorithm>
#include <atomic>
#include <bit>
#include <chrono>
#include <deque>
#include <cmath>
#include <mutex>
#include <random>
#include <thread>

#include "mgen/arithmetic.hpp"
#include "mgen/bounds.hpp"
#include "mgen/combinatorics.hpp"
#include "mgen/error.hpp"

namespace mgen {

namespace {

constexpr std::uint64_t kMaxSearchPoints = std::uint64_t{1} << 22;
constexpr std::uint32_t kMaxTabled = 1024;

using Clock = std::chrono::steady_clock;

// Point table of the ambient, indexed canonically.
class Space {
 public:
  explicit Space(const Ambient& amb) : amb_(amb), f_(*amb.field) {
    const auto size = amb.size();
    if (!size || *size > kMaxSearchPoints) throw PreconditionError("q^n must be at most 2^22 for search");
    size_ = static_cast<std::uint32_t>(*size);
    n_ = static_cast<std::size_t>(amb.n);
    coords_.resize(std::size_t{size_} * n_);
    for (std::uint32_t i = 0; i < size_; ++i) {
      const Point p = point_at(amb, i);
      for (std::size_t j = 0; j < n_; ++j) coords_[i * n_ + j] = p.coords[j];
    }
    if (f_.q() != 2 && size_ <= kMaxTabled) {
      const std::uint32_t q = f_.q();
      add_.resize(std::size_t{size_} * size_);
      scale_.resize(std::size_t{q} * size_);
      std::vector<FieldElement> tmp(n_);
      for (std::uint32_t x = 0; x < size_; ++x) {
        for (std::uint32_t y = 0; y < size_; ++y) {
          for (std::size_t j = 0; j < n_; ++j) tmp[j] = f_.add(coords(x)[j], coords(y)[j]);
          add_[std::size_t{x} * size_ + y] = index(tmp.data());
        }
        for (std::uint32_t l = 0; l < q; ++l) {
          for (std::size_t j = 0; j < n_; ++j) tmp[j] = f_.mul(FieldElement{l}, coords(x)[j]);
          scale_[std::size_t{l} * size_ + x] = index(tmp.data());
        }
      }
      minus_one_ = f_.neg(f_.one()).value;
    }
  }

  // Index arithmetic, available when tabled() is true.
  bool tabled() const { return !add_.empty(); }
  std::uint32_t add(std::uint32_t x, std::uint32_t y) const { return add_[std::size_t{x} * size_ + y]; }
  std::uint32_t scale(std::uint32_t l, std::uint32_t x) const { return scale_[std::size_t{l} * size_ + x]; }
  std::uint32_t sub(std::uint32_t x, std::uint32_t y) const { return add(x, scale(minus_one_, y)); }

  std::uint32_t size() const { return size_; }
  std::size_t n() const { return n_; }
  const FieldSpec& field() const { return f_; }
  const Ambient& ambient() const { return amb_; }
  const FieldElement* coords(std::uint32_t i) const { return &coords_[std::size_t{i} * n_]; }

  std::uint32_t index(const FieldElement* c) const {
    std::uint64_t idx = 0;
    for (std::size_t j = 0; j < n_; ++j) idx = idx * f_.q() + c[j].value;
    return static_cast<std::uint32_t>(idx);
  }

 private:
  const Ambient& amb_;
  const FieldSpec& f_;
  std::uint32_t size_ = 0;
  std::size_t n_ = 0;
  std::vector<FieldElement> coords_;
  std::vector<std::uint32_t> add_, scale_;
  std::uint32_t minus_one_ = 0;
};

// Scratch for walking the affine hull of a point and a small base.
struct HullScratch {
  std::vector<FieldElement> diffs, acc;
  std::vector<std::uint32_t> lambda;
  std::vector<std::uint32_t> xdiffs;
  std::vector<std::uint32_t> xacc;
};

// Calls fn(index) for every point p + sum lambda_i (b_i - p), lambda in F_q^r.
// Points may repeat only if the base is dependent, which never happens here.
template <class Fn>
void for_each_hull_point(const Space& sp, std::uint32_t p, std::span<const std::uint32_t> base, HullScratch& s,
                         Fn&& fn) {
  const std::size_t r = base.size();
  if (sp.field().q() == 2) {
    // Over F_2 the index is the bit vector of coordinates, so addition is xor.
    s.xdiffs.resize(r);
    for (std::size_t i = 0; i < r; ++i) s.xdiffs[i] = base[i] ^ p;
    std::uint32_t x = p;
    fn(x);
    for (std::uint32_t g = 1; g < (1u << r); ++g) {
      x ^= s.xdiffs[static_cast<std::size_t>(std::countr_zero(g))];
      fn(x);
    }
    return;
  }
  if (sp.tabled()) {
    const std::uint32_t q = sp.field().q();
    s.xdiffs.resize(r);
    s.xacc.resize(r + 1);
    s.lambda.assign(r, 0);
    for (std::size_t i = 0; i < r; ++i) s.xdiffs[i] = sp.sub(base[i], p);
    s.xacc[0] = p;
    std::size_t level = 0;
    while (true) {
      if (level == r) {
        fn(s.xacc[r]);
        if (r == 0) return;
        --level;
        ++s.lambda[level];
        continue;
      }
      if (s.lambda[level] >= q) {
        s.lambda[level] = 0;
        if (level == 0) return;
        --level;
        ++s.lambda[level];
        continue;
      }
      s.xacc[level + 1] = sp.add(s.xacc[level], sp.scale(s.lambda[level], s.xdiffs[level]));
      ++level;
    }
  }
  const auto& f = sp.field();
  const std::size_t n = sp.n();
  s.diffs.resize(r * n);
  s.acc.resize((r + 1) * n);
  s.lambda.assign(r, 0);
  const FieldElement* pc = sp.coords(p);
  for (std::size_t i = 0; i < r; ++i) {
    const FieldElement* bc = sp.coords(base[i]);
    for (std::size_t j = 0; j < n; ++j) s.diffs[i * n + j] = f.sub(bc[j], pc[j]);
  }
  for (std::size_t j = 0; j < n; ++j) s.acc[j] = pc[j];
  // acc row l holds p + sum_{i<l} lambda_i d_i.
  std::size_t level = 0;
  while (true) {
    if (level == r) {
      fn(sp.index(&s.acc[r * n]));
      if (r == 0) return;
      --level;
      ++s.lambda[level];
      continue;
    }
    if (s.lambda[level] >= f.q()) {
      s.lambda[level] = 0;
      if (level == 0) return;
      --level;
      ++s.lambda[level];
      continue;
    }
    const FieldElement lam{s.lambda[level]};
    const FieldElement* prev = &s.acc[level * n];
    FieldElement* next = &s.acc[(level + 1) * n];
    const FieldElement* d = &s.diffs[level * n];
    for (std::size_t j = 0; j < n; ++j) next[j] = f.add(prev[j], f.mul(lam, d[j]));
    ++level;
  }
}

// Calls fn(index) for every point that adding p to the chosen set would block:
// the hulls of p with each subset of size min(m - 2, |chosen|).
template <class Fn>
void for_each_blocked_by(const Space& sp, int m, std::span<const std::uint32_t> chosen, std::uint32_t p,
                         HullScratch& s, std::vector<std::uint32_t>& base, Fn&& fn) {
  const std::size_t r = std::min<std::size_t>(static_cast<std::size_t>(m - 2), chosen.size());
  base.resize(r);
  for_each_combination(chosen.size(), r, [&](std::span<const std::size_t> idx) {
    for (std::size_t i = 0; i < r; ++i) base[i] = chosen[idx[i]];
    for_each_hull_point(sp, p, base, s, fn);
    return true;
  });
}

// Blocked-point bookkeeping shared by the exact and greedy searches: a point
// is blocked while it lies in the affine hull of some subset of size
// min(m - 1, |A|) of the chosen set A.
class BlockState {
 public:
  BlockState(const Space& sp, int m) : sp_(sp), m_(m), blocked_(sp.size(), 0) {}

  bool blocked(std::uint32_t i) const { return blocked_[i] != 0; }
  const std::vector<std::uint32_t>& chosen() const { return chosen_; }
  int m() const { return m_; }

  // Adds p and returns an undo mark.
  std::size_t push(std::uint32_t p) {
    const std::size_t mark = touched_.size();
    for_each_blocked_by(sp_, m_, chosen_, p, scratch_, base_, [&](std::uint32_t x) {
      ++blocked_[x];
      touched_.push_back(x);
    });
    chosen_.push_back(p);
    return mark;
  }

  void pop(std::size_t mark) {
    for (std::size_t i = touched_.size(); i-- > mark;) --blocked_[touched_[i]];
    touched_.resize(mark);
    chosen_.pop_back();
  }

 private:
  const Space& sp_;
  int m_;
  std::vector<std::uint32_t> blocked_;
  std::vector<std::uint32_t> chosen_;
  std::vector<std::uint32_t> touched_;
  HullScratch scratch_;
  std::vector<std::uint32_t> base_;
};

// Candidates at one node and, for each position j, an upper bound on how many
// of cand[j..] can join the set together.
struct Level {
  std::vector<std::uint32_t> cand;
  std::vector<std::uint32_t> bound;
  std::vector<std::uint64_t> rows;     // conflict rows, words per row
  std::vector<std::uint64_t> classes;  // colour classes, words per class
};

class Bounder {
 public:
  Bounder(const Space& sp, const SearchLimits& limits) : sp_(sp), limits_(limits), pos_(sp.size(), -1) {}

  void expand(const BlockState& st, std::uint32_t from, Level& lv) {
    lv.cand.clear();
    for (std::uint32_t i = from; i < sp_.size(); ++i) {
      if (!st.blocked(i)) lv.cand.push_back(i);
    }
    const std::size_t k = lv.cand.size();
    lv.bound.resize(k);
    for (std::size_t j = 0; j < k; ++j) lv.bound[j] = static_cast<std::uint32_t>(k - j);
    if (limits_.prune_by_coloring && k > 1) colour(st, lv);
  }

 private:
  // Two candidates conflict when adding one blocks the other; a colour class
  // is a set of pairwise conflicting candidates, so an extension takes at most
  // one point from each class. Colouring back to front keeps every suffix
  // properly coloured.
  void colour(const BlockState& st, Level& lv) {
    const std::size_t k = lv.cand.size();
    const std::size_t words = (k + 63) / 64;
    for (std::size_t j = 0; j < k; ++j) pos_[lv.cand[j]] = static_cast<std::int32_t>(j);
    lv.rows.assign(k * words, 0);
    for (std::size_t a = 0; a < k; ++a) {
      std::uint64_t* row = &lv.rows[a * words];
      for_each_blocked_by(sp_, st.m(), st.chosen(), lv.cand[a], scratch_, base_, [&](std::uint32_t x) {
        const std::int32_t b = pos_[x];
        if (b >= 0) row[b / 64] |= std::uint64_t{1} << (b % 64);
      });
    }
    for (std::size_t j = 0; j < k; ++j) pos_[lv.cand[j]] = -1;

    lv.classes.clear();
    std::size_t ncls = 0;
    for (std::size_t v = k; v-- > 0;) {
      const std::uint64_t* row = &lv.rows[v * words];
      std::size_t c = 0;
      for (; c < ncls; ++c) {
        const std::uint64_t* cls = &lv.classes[c * words];
        bool all = true;
        for (std::size_t w = 0; w < words && all; ++w) all = (cls[w] & ~row[w]) == 0;
        if (all) break;
      }
      if (c == ncls) {
        lv.classes.resize((ncls + 1) * words, 0);
        ++ncls;
      }
      lv.classes[c * words + v / 64] |= std::uint64_t{1} << (v % 64);
      lv.bound[v] = std::min(lv.bound[v], static_cast<std::uint32_t>(ncls));
    }
  }

  const Space& sp_;
  const SearchLimits& limits_;
  std::vector<std::int32_t> pos_;
  HullScratch scratch_;
  std::vector<std::uint32_t> base_;
};

// best key = value << 32 | (2^32 - 1 - subtree): larger value wins, then the
// lexicographically earlier subtree.
std::uint64_t pack_key(std::uint64_t value, std::uint64_t subtree) {
  return (value << 32) | (0xffffffffull - subtree);
}
std::uint64_t key_value(std::uint64_t key) { return key >> 32; }
std::uint64_t key_subtree(std::uint64_t key) { return 0xffffffffull - (key & 0xffffffffull); }

struct Shared {
  std::atomic<bool> aborted{false};
  std::atomic<std::uint64_t> nodes{0};
  std::atomic<std::uint64_t> best_key{0};
  std::uint64_t max_nodes = 0;
  Clock::time_point deadline;
  std::size_t cap = 0;

  void offer(std::uint64_t key) {
    std::uint64_t cur = best_key.load();
    while (key > cur && !best_key.compare_exchange_weak(cur, key)) {
    }
  }
};

struct SubtreeResult {
  std::size_t value = 0;
  std::vector<std::uint32_t> witness;
};

class Worker {
 public:
  Worker(const Space& sp, const SearchLimits& limits, Shared& sh, const BlockState& root)
      : sp_(sp), limits_(limits), sh_(sh), state_(root), bounder_(sp, limits) {}

  SubtreeResult run(std::uint64_t subtree, std::uint32_t first) {
    subtree_ = subtree;
    result_ = {};
    done_ = false;
    const std::size_t mark = state_.push(first);
    dfs(first + 1, 0);
    state_.pop(mark);
    return result_;
  }

  void flush() {
    sh_.nodes += pending_;
    pending_ = 0;
  }

 private:
  bool stopped() {
    if (done_ || sh_.aborted.load(std::memory_order_relaxed)) return true;
    const std::uint64_t key = sh_.best_key.load(std::memory_order_relaxed);
    return key_value(key) >= sh_.cap && key_subtree(key) < subtree_;
  }

  void count_node() {
    if (++pending_ < 1024) return;
    const std::uint64_t total = (sh_.nodes += pending_);
    pending_ = 0;
    if (total >= sh_.max_nodes || Clock::now() >= sh_.deadline) sh_.aborted = true;
  }

  void dfs(std::uint32_t from, std::size_t depth) {
    if (stopped()) return;
    count_node();
    const std::size_t s = state_.chosen().size();
    if (s > result_.value) {
      result_.value = s;
      result_.witness = state_.chosen();
      sh_.offer(pack_key(s, subtree_));
      if (limits_.stop_at_bound && s >= sh_.cap) {
        done_ = true;
        return;
      }
    }
    if (levels_.size() <= depth) levels_.resize(depth + 1);
    Level& lv = levels_[depth];
    bounder_.expand(state_, from, lv);
    const bool prune = limits_.prune_by_count || limits_.prune_by_coloring;
    for (std::size_t j = 0; j < lv.cand.size(); ++j) {
      if (prune && pack_key(s + lv.bound[j], subtree_) <= sh_.best_key.load(std::memory_order_relaxed)) break;
      const std::uint32_t c = lv.cand[j];
      const std::size_t mark = state_.push(c);
      dfs(c + 1, depth + 1);
      state_.pop(mark);
      if (stopped()) return;
    }
  }

  const Space& sp_;
  const SearchLimits& limits_;
  Shared& sh_;
  BlockState state_;
  Bounder bounder_;
  std::deque<Level> levels_;
  std::uint64_t subtree_ = 0;
  std::uint64_t pending_ = 0;
  bool done_ = false;
  SubtreeResult result_;
};

PointSet to_point_set(const Ambient& amb, const std::vector<std::uint32_t>& idx) {
  std::vector<Point> pts;
  pts.reserve(idx.size());
  for (auto i : idx) pts.push_back(point_at(amb, i));
  return PointSet(amb, std::move(pts));
}

bool lex_less(std::vector<std::uint32_t> a, std::vector<std::uint32_t> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  return a < b;
}

// 0, e_1, ..., e_n; coordinate 1 is the most significant digit of an index.
std::vector<std::uint32_t> frame_indices(const Ambient& amb) {
  std::vector<std::uint32_t> idx{0};
  std::uint64_t unit = 1;
  for (int i = 1; i < amb.n; ++i) unit *= amb.q();
  for (int i = 0; i < amb.n; ++i) {
    idx.push_back(static_cast<std::uint32_t>(unit));
    unit /= amb.q();
  }
  return idx;
}

struct Outcome {
  SubtreeResult best;
  bool exact = true;
  std::uint64_t nodes = 0;
};

// Branch and bound over all extensions of a fixed prefix.
Outcome run_dfs(const Space& sp, int m, const SearchLimits& limits, const std::vector<std::uint32_t>& prefix,
                std::size_t cap, std::uint64_t max_nodes, Clock::time_point deadline) {
  Shared sh;
  sh.max_nodes = max_nodes;
  sh.deadline = deadline;
  sh.cap = cap;

  BlockState root(sp, m);
  for (auto p : prefix) root.push(p);
  SubtreeResult root_result{prefix.size(), prefix};
  sh.best_key = pack_key(root_result.value, 0);
  sh.nodes = 1;

  // One subtree per choice of the first point after the prefix.
  Level top;
  Bounder(sp, limits).expand(root, 0, top);
  const std::vector<std::uint32_t>& firsts = top.cand;
  std::vector<SubtreeResult> results(firsts.size());
  std::atomic<std::size_t> next{0};
  const std::size_t root_size = root.chosen().size();
  const bool prune = limits.prune_by_count || limits.prune_by_coloring;

  auto work = [&] {
    Worker w(sp, limits, sh, root);
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= firsts.size() || sh.aborted) break;
      const std::uint64_t subtree = i + 1;
      const std::uint64_t best = sh.best_key.load();
      if (key_value(best) >= sh.cap && key_subtree(best) < subtree) break;
      if (prune && pack_key(root_size + top.bound[i], subtree) <= best) break;
      results[i] = w.run(subtree, firsts[i]);
    }
    w.flush();
  };
  const unsigned workers = std::max(1u, limits.workers);
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }

  Outcome out;
  out.best = root_result;
  for (const auto& r : results) {
    if (r.value > out.best.value || (r.value == out.best.value && lex_less(r.witness, out.best.witness))) {
      out.best = r;
    }
  }
  out.exact = !sh.aborted.load();
  out.nodes = sh.nodes.load();
  return out;
}

}  // namespace

double search_cap(const Ambient& amb, int m) {
  const auto size = amb.size();
  double cap = size ? static_cast<double>(*size) : std::ldexp(1.0, 62);
  if (m >= 4) cap = std::min(cap, std::floor(refined_bound(amb.n, amb.q(), m)));
  return cap;
}

SearchCertificate search_exact(const Ambient& amb, int m, const SearchLimits& limits) {
  check_m_range(amb, m);
  const auto t0 = Clock::now();
  const auto deadline =
      t0 + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(limits.max_seconds));
  const Space sp(amb);
  const double cap = search_cap(amb, m);
  const std::size_t stop = limits.stop_at_bound ? static_cast<std::size_t>(cap) : static_cast<std::size_t>(-1);

  std::vector<std::uint32_t> prefix;
  if (limits.fix_frame) prefix = frame_indices(amb);
  else if (limits.fix_origin) prefix = {0};
  Outcome out = run_dfs(sp, m, limits, prefix, stop, limits.max_nodes, deadline);

  // A set that misses the frame lies in a hyperplane; its best size is the
  // answer one dimension down. (m > n + 1 leaves such sets below n + 1.)
  bool used_hyperplane = false;
  if (limits.fix_frame && amb.n >= 2 && m <= amb.n + 1 && out.best.value < stop) {
    const Ambient lower(amb.n - 1, amb.field);
    if (out.best.value < search_cap(lower, m) || !out.exact) {
      SearchLimits sub = limits;
      sub.max_nodes = limits.max_nodes > out.nodes ? limits.max_nodes - out.nodes : 0;
      sub.max_seconds = std::chrono::duration<double>(deadline - Clock::now()).count();
      const SearchCertificate low = search_exact(lower, m, sub);
      used_hyperplane = true;
      out.nodes += low.nodes_explored;
      out.exact = out.exact && low.exact;
      std::vector<std::uint32_t> lifted;
      for (const auto& p : low.witness.points()) {
        Point q = p;
        q.coords.push_back(amb.field->zero());
        lifted.push_back(static_cast<std::uint32_t>(point_index(amb, q)));
      }
      // Ties keep the spanning witness.
      if (lifted.size() > out.best.value) out.best = {lifted.size(), lifted};
    }
  }

  SearchCertificate cert;
  cert.ambient = amb;
  cert.m = m;
  cert.witness = to_point_set(amb, out.best.witness);
  cert.value = out.best.value;
  cert.exact = out.exact;
  cert.nodes_explored = out.nodes;
  cert.prune_bound_used = cap;
  cert.method = "exact";
  if (limits.fix_frame) {
    cert.reductions.push_back("affine frame fixed: spanning sets contain 0, e_1, ..., e_n");
    if (used_hyperplane) cert.reductions.push_back("non-spanning sets: recursive search in a hyperplane");
  } else if (limits.fix_origin) {
    cert.reductions.push_back("translation: origin fixed");
  }
  cert.reductions.push_back("canonical-order growth");
  if (limits.prune_by_count) cert.reductions.push_back("candidate-count pruning");
  if (limits.prune_by_coloring) cert.reductions.push_back("conflict-colouring pruning");
  if (limits.stop_at_bound) cert.reductions.push_back("stop at floor(refined bound)");
  return cert;
}

SearchCertificate search_greedy(const Ambient& amb, int m, std::uint64_t seed, std::uint64_t restarts) {
  check_m_range(amb, m);
  const Space sp(amb);
  std::mt19937_64 rng(seed);
  std::vector<std::uint32_t> order(sp.size());
  for (std::uint32_t i = 0; i < sp.size(); ++i) order[i] = i;

  std::vector<std::uint32_t> best;
  std::uint64_t examined = 0;
  for (std::uint64_t r = 0; r < std::max<std::uint64_t>(restarts, 1); ++r) {
    std::shuffle(order.begin(), order.end(), rng);
    BlockState st(sp, m);
    for (auto i : order) {
      ++examined;
      if (!st.blocked(i)) st.push(i);
    }
    std::vector<std::uint32_t> got = st.chosen();
    std::sort(got.begin(), got.end());
    if (got.size() > best.size() || (got.size() == best.size() && got < best)) best = std::move(got);
  }

  SearchCertificate cert;
  cert.ambient = amb;
  cert.m = m;
  cert.witness = to_point_set(amb, best);
  cert.value = best.size();
  cert.exact = false;
  cert.nodes_explored = examined;
  cert.prune_bound_used = search_cap(amb, m);
  cert.seed = seed;
  cert.restarts = restarts;
  cert.method = "greedy";
  cert.reductions.push_back("none");
  return cert;
}

const char* to_string(CertificateStatus s) {
  switch (s) {
    case CertificateStatus::Ok: return "ok";
    case CertificateStatus::Malformed: return "malformed";
    case CertificateStatus::AmbientMismatch: return "ambient-mismatch";
    case CertificateStatus::NotGeneral: return "not-m-general";
    case CertificateStatus::ValueMismatch: return "value-mismatch";
    case CertificateStatus::BoundViolation: return "bound-violation";
  }
  return "unknown";
}

CertificateCheck check_certificate(const SearchCertificate& cert) {
  if (!(cert.witness.ambient() == cert.ambient)) {
    return {CertificateStatus::AmbientMismatch, "witness ambient differs from the declared parameters"};
  }
  try {
    check_m_range(cert.ambient, cert.m);
  } catch (const PreconditionError& e) {
    return {CertificateStatus::Malformed, e.what()};
  }
  if (cert.value != cert.witness.size()) {
    return {CertificateStatus::ValueMismatch, "value " + std::to_string(cert.value) + " but witness has " +
                                                  std::to_string(cert.witness.size()) + " points"};
  }
  if (!is_m_general_geometric(cert.witness, cert.m)) {
    return {CertificateStatus::NotGeneral, "witness fails the geometric m-general test"};
  }
  if (cert.witness.size() >= static_cast<std::size_t>(cert.m) && !is_m_general_arithmetic(cert.witness, cert.m)) {
    return {CertificateStatus::NotGeneral, "witness fails the arithmetic m-general test"};
  }
  const double cap = search_cap(cert.ambient, cert.m);
  if (static_cast<double>(cert.value) > cap) {
    return {CertificateStatus::BoundViolation,
            "value " + std::to_string(cert.value) + " exceeds the upper bound " + format_real(cap)};
  }
  return {};
}

}  // namespace mgen
