#include <algorithm>
#include <deque>
#include <map>

#include "dnc/oracle.hpp"

namespace dnc {

namespace {

using PosSet = std::vector<int>;  // sorted, unique

PosSet merge(const PosSet& a, const PosSet& b) {
  PosSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

// Position (Glushkov) automaton of a regular expression.
class PositionAutomaton {
 public:
  PositionAutomaton(const RegexNode& root, const ChannelSpec& spec) : spec_(spec) {
    const Info top = visit(root);
    nullable = top.nullable;
    first = top.first;
    last = top.last;
  }

  std::vector<std::size_t> symbol_of;  // position -> symbol index
  std::vector<PosSet> follow;
  PosSet first, last;
  bool nullable = false;

 private:
  struct Info {
    bool nullable = true;
    PosSet first, last;
  };

  void add_follow(const PosSet& from, const PosSet& to) {
    for (int p : from) follow[static_cast<std::size_t>(p)] = merge(follow[static_cast<std::size_t>(p)], to);
  }

  Info visit(const RegexNode& n) {
    switch (n.kind) {
      case RegexNode::Kind::Epsilon:
        return {};
      case RegexNode::Kind::Symbol: {
        const auto idx = spec_.symbol_index(n.symbol);
        if (!idx) throw BuildError("undeclared symbol '" + n.symbol + "'");
        const int p = static_cast<int>(symbol_of.size());
        symbol_of.push_back(*idx);
        follow.emplace_back();
        return {false, {p}, {p}};
      }
      case RegexNode::Kind::Union: {
        Info acc{false, {}, {}};
        for (const auto& c : n.children) {
          Info ci = visit(c);
          acc.nullable = acc.nullable || ci.nullable;
          acc.first = merge(acc.first, ci.first);
          acc.last = merge(acc.last, ci.last);
        }
        return acc;
      }
      case RegexNode::Kind::Concat: {
        Info acc = visit(n.children.front());
        for (std::size_t i = 1; i < n.children.size(); ++i) {
          Info rhs = visit(n.children[i]);
          add_follow(acc.last, rhs.first);
          if (acc.nullable) acc.first = merge(acc.first, rhs.first);
          acc.last = rhs.nullable ? merge(acc.last, rhs.last) : rhs.last;
          acc.nullable = acc.nullable && rhs.nullable;
        }
        return acc;
      }
      case RegexNode::Kind::Star: {
        Info inner = visit(n.children.front());
        add_follow(inner.last, inner.first);
        inner.nullable = true;
        return inner;
      }
    }
    return {};
  }

  const ChannelSpec& spec_;
};

// Keeps states reachable from the initial state that can also reach an
// accepting state, renumbered in their original order.
ConstraintAutomaton prune(const ConstraintAutomaton& a) {
  const std::size_t n = a.num_states();
  const std::size_t k = a.num_symbols;
  std::vector<std::vector<int>> reverse(n);
  for (std::size_t s = 0; s < n; ++s)
    for (std::size_t x = 0; x < k; ++x)
      if (int t = a.next(static_cast<int>(s), x); t != ConstraintAutomaton::kReject)
        reverse[static_cast<std::size_t>(t)].push_back(static_cast<int>(s));

  std::vector<bool> live(n, false);
  std::deque<int> work;
  for (std::size_t s = 0; s < n; ++s)
    if (a.accepting[s]) {
      live[s] = true;
      work.push_back(static_cast<int>(s));
    }
  while (!work.empty()) {
    const int t = work.front();
    work.pop_front();
    for (int s : reverse[static_cast<std::size_t>(t)])
      if (!live[static_cast<std::size_t>(s)]) {
        live[static_cast<std::size_t>(s)] = true;
        work.push_back(s);
      }
  }

  std::vector<bool> reached(n, false);
  reached[static_cast<std::size_t>(a.initial)] = true;
  work.push_back(a.initial);
  while (!work.empty()) {
    const int s = work.front();
    work.pop_front();
    for (std::size_t x = 0; x < k; ++x)
      if (int t = a.next(s, x); t != ConstraintAutomaton::kReject && !reached[static_cast<std::size_t>(t)]) {
        reached[static_cast<std::size_t>(t)] = true;
        work.push_back(t);
      }
  }
  for (std::size_t s = 0; s < n; ++s) live[s] = live[s] && reached[s];

  ConstraintAutomaton out;
  out.num_symbols = k;
  if (!live[static_cast<std::size_t>(a.initial)]) {
    // Empty language: a single rejecting state.
    out.initial = 0;
    out.accepting = {false};
    out.transitions.assign(k, ConstraintAutomaton::kReject);
    return out;
  }
  std::vector<int> remap(n, ConstraintAutomaton::kReject);
  int next_id = 0;
  for (std::size_t s = 0; s < n; ++s)
    if (live[s]) remap[s] = next_id++;
  out.initial = remap[static_cast<std::size_t>(a.initial)];
  out.accepting.resize(static_cast<std::size_t>(next_id));
  out.transitions.assign(static_cast<std::size_t>(next_id) * k, ConstraintAutomaton::kReject);
  for (std::size_t s = 0; s < n; ++s) {
    if (!live[s]) continue;
    const auto ns = static_cast<std::size_t>(remap[s]);
    out.accepting[ns] = a.accepting[s];
    for (std::size_t x = 0; x < k; ++x) {
      const int t = a.next(static_cast<int>(s), x);
      if (t != ConstraintAutomaton::kReject) out.transitions[ns * k + x] = remap[static_cast<std::size_t>(t)];
    }
  }
  return out;
}

ConstraintAutomaton free_automaton(std::size_t k) {
  ConstraintAutomaton a;
  a.num_symbols = k;
  a.accepting = {true};
  a.transitions.assign(k, 0);
  return a;
}

ConstraintAutomaton pattern_automaton(const ChannelSpec& spec, const ForbiddenPatterns& fp,
                                      const AutomatonOptions& options) {
  const std::size_t k = spec.symbols.size();
  std::vector<std::vector<int>> go(1, std::vector<int>(k, -1));
  std::vector<bool> terminal(1, false);
  for (const auto& pattern : fp.patterns) {
    int node = 0;
    for (const auto& name : pattern) {
      const auto x = spec.symbol_index(name);
      if (!x) throw BuildError("undeclared symbol '" + name + "' in forbidden pattern");
      auto& slot = go[static_cast<std::size_t>(node)][*x];
      if (slot < 0) {
        slot = static_cast<int>(go.size());
        go.emplace_back(k, -1);
        terminal.push_back(false);
      }
      node = slot;
    }
    terminal[static_cast<std::size_t>(node)] = true;
  }
  if (go.size() > options.state_limit) throw ResourceError("pattern automaton exceeds the state limit");

  // Breadth-first failure links; missing edges are filled with the failure
  // target's edge so `go` becomes the full transition function.
  std::vector<int> fail(go.size(), 0);
  std::deque<int> queue;
  for (std::size_t x = 0; x < k; ++x) {
    int& t = go[0][x];
    if (t < 0) {
      t = 0;
    } else {
      fail[static_cast<std::size_t>(t)] = 0;
      queue.push_back(t);
    }
  }
  while (!queue.empty()) {
    const auto u = static_cast<std::size_t>(queue.front());
    queue.pop_front();
    terminal[u] = terminal[u] || terminal[static_cast<std::size_t>(fail[u])];
    for (std::size_t x = 0; x < k; ++x) {
      int& t = go[u][x];
      const int via_fail = go[static_cast<std::size_t>(fail[u])][x];
      if (t < 0) {
        t = via_fail;
      } else {
        fail[static_cast<std::size_t>(t)] = via_fail;
        queue.push_back(t);
      }
    }
  }

  ConstraintAutomaton a;
  a.num_symbols = k;
  a.initial = 0;
  a.accepting.assign(go.size(), true);
  a.transitions.resize(go.size() * k);
  for (std::size_t s = 0; s < go.size(); ++s) {
    if (terminal[s]) a.accepting[s] = false;
    for (std::size_t x = 0; x < k; ++x) {
      const int t = go[s][x];
      a.transitions[s * k + x] = terminal[static_cast<std::size_t>(t)] ? ConstraintAutomaton::kReject : t;
    }
  }
  return prune(a);
}

ConstraintAutomaton regex_automaton(const ChannelSpec& spec, const RegexNode& expr,
                                    const AutomatonOptions& options) {
  const PositionAutomaton pa(expr, spec);
  const std::size_t k = spec.symbols.size();
  constexpr int kStart = -1;

  std::map<PosSet, int> ids;
  std::vector<PosSet> states;
  ConstraintAutomaton a;
  a.num_symbols = k;

  auto intern = [&](PosSet s) {
    auto [it, inserted] = ids.try_emplace(s, static_cast<int>(states.size()));
    if (inserted) {
      if (states.size() >= options.state_limit)
        throw ResourceError("regex determinization exceeds the state limit of " +
                            std::to_string(options.state_limit));
      states.push_back(std::move(s));
    }
    return it->second;
  };

  a.initial = intern({kStart});
  for (std::size_t cur = 0; cur < states.size(); ++cur) {
    const PosSet set = states[cur];
    bool accept = false;
    std::vector<PosSet> succ(k);
    for (int p : set) {
      const PosSet& nexts = p == kStart ? pa.first : pa.follow[static_cast<std::size_t>(p)];
      if (p == kStart)
        accept = accept || pa.nullable;
      else
        accept = accept || std::binary_search(pa.last.begin(), pa.last.end(), p);
      for (int q : nexts) succ[pa.symbol_of[static_cast<std::size_t>(q)]].push_back(q);
    }
    a.accepting.push_back(accept);
    for (std::size_t x = 0; x < k; ++x) {
      auto& s = succ[x];
      std::sort(s.begin(), s.end());
      s.erase(std::unique(s.begin(), s.end()), s.end());
      a.transitions.push_back(s.empty() ? ConstraintAutomaton::kReject : intern(std::move(s)));
    }
  }
  return prune(a);
}

}  // namespace

bool ConstraintAutomaton::accepts(const std::vector<std::size_t>& word) const {
  int s = initial;
  for (std::size_t x : word) {
    if (x >= num_symbols) return false;
    s = next(s, x);
    if (s == kReject) return false;
  }
  return accepting[static_cast<std::size_t>(s)];
}

ConstraintAutomaton build_automaton(const ChannelSpec& spec, const AutomatonOptions& options) {
  return std::visit(
      [&](const auto& c) -> ConstraintAutomaton {
        using T = std::decay_t<decltype(c)>;
        if constexpr (std::is_same_v<T, FreeConstraint>)
          return free_automaton(spec.symbols.size());
        else if constexpr (std::is_same_v<T, ForbiddenPatterns>)
          return pattern_automaton(spec, c, options);
        else
          return regex_automaton(spec, c.expr, options);
      },
      spec.constraint);
}

}  // namespace dnc
