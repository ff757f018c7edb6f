#include "hdldiff/reduce/reducer.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <map>
#include <sstream>

#include "hdldiff/action/transforms.hpp"
#include "hdldiff/hdl/elaborate.hpp"
#include "hdldiff/hdl/parser.hpp"
#include "hdldiff/hdl/render.hpp"
#include "hdldiff/rtl/transforms.hpp"

namespace hdldiff {
namespace {

using LineFn = std::function<std::optional<int>(int)>;

struct BudgetHit {};

// Removable siblings: each span runs from a node's first line to the line before its next sibling.
struct NodeList {
  int kind = 0;  // 0 modules, 1 module items, 2 block statements
  int anchor = 0;
  std::vector<std::pair<int, int>> spans;
};

int item_line(const Item& item) {
  return std::visit([](const auto& x) { return x.loc.line; }, item);
}

void collect_blocks(const Stmt& s, std::vector<NodeList>& out) {
  if (s.kind == Stmt::Kind::Block && !s.stmts.empty()) {
    NodeList l{2, s.loc.line, {}};
    bool ok = s.stmts.front().loc.line > s.loc.line && last_line(s.stmts.back()) < s.end_line;
    for (std::size_t i = 0; ok && i < s.stmts.size(); ++i) {
      const int start = s.stmts[i].loc.line;
      const int end = i + 1 < s.stmts.size() ? s.stmts[i + 1].loc.line - 1 : s.end_line - 1;
      if (end < start || last_line(s.stmts[i]) > end) ok = false;
      l.spans.emplace_back(start, end);
    }
    if (ok) out.push_back(std::move(l));
  }
  for (const auto& c : s.stmts) collect_blocks(c, out);
  if (s.then_branch) collect_blocks(*s.then_branch, out);
  if (s.else_branch) collect_blocks(*s.else_branch, out);
}

std::vector<NodeList> enumerate_lists(const SourceUnit& unit) {
  std::vector<NodeList> out;
  const auto& mods = unit.main().modules;
  if (mods.size() > 1) {
    NodeList l{0, 0, {}};
    for (std::size_t i = 0; i < mods.size(); ++i) {
      const int end = i + 1 < mods.size() ? mods[i + 1].loc.line - 1 : mods[i].end_line;
      l.spans.emplace_back(mods[i].loc.line, end);
    }
    out.push_back(std::move(l));
  }
  for (const auto& m : mods) {
    if (!m.items.empty()) {
      NodeList l{1, m.loc.line, {}};
      for (std::size_t i = 0; i < m.items.size(); ++i) {
        const int start = item_line(m.items[i]);
        const int end = i + 1 < m.items.size() ? item_line(m.items[i + 1]) - 1 : m.end_line - 1;
        l.spans.emplace_back(start, end);
      }
      out.push_back(std::move(l));
    }
    for (const auto& item : m.items)
      if (const auto* p = std::get_if<Process>(&item)) collect_blocks(p->body, out);
  }
  // Later anchors first: editing a list only touches lines below its anchor.
  std::stable_sort(out.begin(), out.end(), [](const NodeList& a, const NodeList& b) {
    return a.anchor != b.anchor ? a.anchor > b.anchor : a.kind > b.kind;
  });
  return out;
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) out.push_back(line);
  return out;
}

std::vector<const char*> act_line_keys(const std::string& op) {
  const auto o = parse_act_op(op);
  if (!o) return {};
  switch (*o) {
    case ActOp::AddBreakpoint: return {"line"};
    case ActOp::BreakpointSlide: return {"from", "to"};
    case ActOp::IfElseProbe: return {"then", "else"};
    case ActOp::StepForLoop: return {"line"};
    case ActOp::CodeFold: return {"start", "end"};
  }
  return {};
}

bool remap_key(TransformRecord& r, const std::string& key, const LineFn& m) {
  const auto v = r.get(key);
  if (!v) return true;
  const auto mapped = m(std::stoi(*v));
  if (!mapped) return false;
  r.set(key, *mapped);
  return true;
}

// Carries RTL records from the current seed to a seed with `delta` applied by
// replaying both chains and mapping each intermediate design's lines.
std::optional<std::vector<TransformRecord>> remap_rtl(const SourceUnit& old_seed, const SourceUnit& new_seed,
                                                      const std::vector<TransformRecord>& records,
                                                      const LineMap& delta) {
  SourceUnit a = old_seed;
  SourceUnit b = new_seed;
  LineFn m = [delta](int l) { return delta.map(l); };
  std::vector<TransformRecord> out;
  try {
    for (const auto& rec : records) {
      TransformRecord r = rec;
      if (rec.op == rtl_op_name(RtlOp::IncludeInject)) {
        const auto count = rec.get_int("count");
        for (long long k = 0; k < count; ++k) {
          const std::string key = "line" + std::to_string(k);
          const int q = static_cast<int>(rec.get_int(key));
          const auto qp = m(q);
          if (!qp) return std::nullopt;
          r.set(key, *qp);
          m = [m, q, at = *qp](int p) -> std::optional<int> {
            if (p == q) return at;
            const auto v = m(p > q ? p - 1 : p);
            if (!v) return std::nullopt;
            return *v + (*v >= at ? 1 : 0);
          };
        }
        a = apply_rtl_record(a, rec).variant;
        b = apply_rtl_record(b, r).variant;
      } else {
        if (!remap_key(r, "line", m)) return std::nullopt;
        auto ra = apply_rtl_record(a, rec);
        auto rb = apply_rtl_record(b, r);
        m = [m, ka = ra.line_map, kb = rb.line_map](int l) -> std::optional<int> {
          const auto o = ka.inverse(l);
          if (!o) return std::nullopt;
          const auto v = m(*o);
          if (!v) return std::nullopt;
          return kb.map(*v);
        };
        a = std::move(ra.variant);
        b = std::move(rb.variant);
      }
      out.push_back(std::move(r));
    }
  } catch (const std::exception&) {
    return std::nullopt;
  }
  return out;
}

std::size_t max_act_index(const std::vector<TransformRecord>& act) {
  std::size_t hi = 0;
  for (const auto& r : act)
    for (const auto& [k, v] : r.params)
      if (k == "at" || k == "at_then" || k == "at_else" || k == "action") hi = std::max(hi, std::stoul(v) + 1);
  return hi;
}

}  // namespace

std::optional<CaseSpec> delete_lines(const CaseSpec& spec, const std::vector<std::pair<int, int>>& ranges, bool forward) {
  auto text = lines_of(render_file(spec.seed, 0));
  const int n = static_cast<int>(text.size());
  LineMap delta = LineMap::identity(n);
  int count = n;
  auto sorted = ranges;
  std::sort(sorted.rbegin(), sorted.rend());
  for (const auto& [a, b] : sorted) {
    if (a < 1 || b > count || b < a) return std::nullopt;
    delta = LineMap::compose(delta, LineMap::deletion(count, a, b, forward));
    text.erase(text.begin() + (a - 1), text.begin() + b);
    count -= b - a + 1;
  }
  std::string joined;
  for (const auto& l : text) joined += l + "\n";

  CaseSpec c = spec;
  try {
    std::map<std::string, std::string> includes;
    for (std::size_t i = 1; i < spec.seed.files.size(); ++i)
      includes[spec.seed.files[i].path] = render_file(spec.seed, static_cast<int>(i));
    c.seed = parse(
        joined,
        [&](const std::string& p) -> std::optional<std::string> {
          const auto it = includes.find(p);
          if (it == includes.end()) return std::nullopt;
          return it->second;
        },
        spec.seed.main().path);
    elaborate(c.seed);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  c.base = remap_plan(spec.base, delta);
  if (c.base.actions.size() != spec.base.actions.size() && !spec.act.empty()) return std::nullopt;
  const LineFn m = [&delta](int l) { return delta.map(l); };
  for (auto& r : c.act)
    for (const char* key : act_line_keys(r.op))
      if (!remap_key(r, key, m)) return std::nullopt;
  auto rtl = remap_rtl(spec.seed, c.seed, spec.rtl, delta);
  if (!rtl) return std::nullopt;
  c.rtl = std::move(*rtl);
  return c;
}

namespace {

class Reducer {
 public:
  Reducer(const CaseSpec& spec, const DebuggerFactory& make, const CampaignConfig& cfg, const ReduceOptions& opt)
      : cur_(spec), make_(make), cfg_(cfg), opt_(opt), start_(std::chrono::steady_clock::now()) {}

  ReduceResult run() {
    ReduceResult res;
    res.original_lines = cur_.seed.main().line_count();
    const auto first = evaluate_case(cur_, make_, cfg_);
    ++checks_;
    if (first.verdict.kind != Verdict::Kind::Inconsistent)
      throw NonReproducible("case does not reproduce: " + first.verdict.label());
    category_ = first.verdict.category;
    outcome_ = first;
    try {
      drop_sides();
      for (bool changed = true; changed;) {
        changed = false;
        changed |= drop_records();
        changed |= remove_nodes();
        changed |= reduce_script();
        changed |= compact();
      }
    } catch (const BudgetHit&) {
      res.budget_exceeded = true;
    }
    res.spec = cur_;
    res.outcome = outcome_;
    res.reduced_lines = cur_.seed.main().line_count();
    res.checks = checks_;
    return res;
  }

 private:
  bool holds(const CaseSpec& cand) {
    if (checks_ >= opt_.max_checks ||
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count() > opt_.time_budget_s)
      throw BudgetHit{};
    ++checks_;
    try {
      auto o = evaluate_case(cand, make_, cfg_);
      if (o.verdict.kind != Verdict::Kind::Inconsistent || o.verdict.category != category_) return false;
      outcome_ = std::move(o);
      return true;
    } catch (const std::exception&) {
      return false;
    }
  }

  bool accept(CaseSpec cand) {
    if (!holds(cand)) return false;
    cur_ = std::move(cand);
    return true;
  }

  void drop_sides() {
    if (!cur_.use_pro || !cur_.use_act) return;
    CaseSpec no_pro = cur_;
    no_pro.use_pro = false;
    no_pro.rtl.clear();
    if (accept(no_pro)) return;
    CaseSpec no_act = cur_;
    no_act.use_act = false;
    no_act.act.clear();
    accept(no_act);
  }

  bool drop_records() {
    bool changed = false;
    for (auto list : {&CaseSpec::rtl, &CaseSpec::act}) {
      for (std::size_t k = (cur_.*list).size(); k-- > 0;) {
        if ((cur_.*list).size() <= 1) break;
        CaseSpec cand = cur_;
        (cand.*list).erase((cand.*list).begin() + static_cast<std::ptrdiff_t>(k));
        changed |= accept(std::move(cand));
      }
    }
    return changed;
  }

  bool try_delete(const std::vector<std::pair<int, int>>& ranges, bool forward) {
    auto cand = delete_lines(cur_, ranges, forward);
    return cand && accept(std::move(*cand));
  }

  static const NodeList* find(const std::vector<NodeList>& lists, int kind, int anchor) {
    for (const auto& l : lists)
      if (l.kind == kind && l.anchor == anchor) return &l;
    return nullptr;
  }

  bool halve_list(int kind, int anchor) {
    bool changed = false;
    const auto initial = enumerate_lists(cur_.seed);
    const NodeList* l = find(initial, kind, anchor);
    if (!l) return false;
    std::size_t chunk = std::max<std::size_t>(1, (l->spans.size() + 1) / 2);
    for (;;) {
      for (std::size_t i = 0;;) {
        const auto lists = enumerate_lists(cur_.seed);
        const NodeList* cur = find(lists, kind, anchor);
        if (!cur || i >= cur->spans.size()) break;
        const std::size_t j = std::min(i + chunk, cur->spans.size()) - 1;
        if (try_delete({{cur->spans[i].first, cur->spans[j].second}}, false))
          changed = true;
        else
          i += chunk;
      }
      if (chunk == 1) break;
      chunk = (chunk + 1) / 2;
    }
    return changed;
  }

  bool remove_nodes() {
    bool changed = false;
    std::vector<std::pair<int, int>> order;
    for (const auto& l : enumerate_lists(cur_.seed)) order.emplace_back(l.kind, l.anchor);
    for (const auto& [kind, anchor] : order) changed |= halve_list(kind, anchor);
    return changed;
  }

  bool reduce_script() {
    if (!cur_.base.probes.empty()) return false;
    const std::size_t lo = cur_.act.empty() ? 0 : std::max(cur_.base.prefix_end(), max_act_index(cur_.act));
    bool changed = false;
    std::size_t chunk = std::max<std::size_t>(1, (cur_.base.actions.size() - std::min(lo, cur_.base.actions.size()) + 1) / 2);
    for (;;) {
      for (std::size_t i = lo; i < cur_.base.actions.size();) {
        CaseSpec cand = cur_;
        auto& acts = cand.base.actions;
        const std::size_t j = std::min(i + chunk, acts.size());
        acts.erase(acts.begin() + static_cast<std::ptrdiff_t>(i), acts.begin() + static_cast<std::ptrdiff_t>(j));
        if (accept(std::move(cand)))
          changed = true;
        else
          i += chunk;
      }
      if (chunk == 1) break;
      chunk = (chunk + 1) / 2;
    }
    return changed;
  }

  bool compact() {
    bool changed = false;
    const auto filler = [&] {
      std::vector<int> lines;
      const auto& f = cur_.seed.main();
      for (int l = 1; l <= f.line_count(); ++l) {
        const auto c = f.line_class(l);
        if (c == LineClass::Comment || c == LineClass::Blank) lines.push_back(l);
      }
      return lines;
    };
    std::size_t chunk = std::max<std::size_t>(1, (filler().size() + 1) / 2);
    for (;;) {
      for (std::size_t i = 0;;) {
        const auto lines = filler();
        if (i >= lines.size()) break;
        const std::size_t j = std::min(i + chunk, lines.size());
        std::vector<std::pair<int, int>> ranges;
        for (std::size_t k = i; k < j; ++k) ranges.emplace_back(lines[k], lines[k]);
        if (try_delete(ranges, true))
          changed = true;
        else
          i += chunk;
      }
      if (chunk == 1) break;
      chunk = (chunk + 1) / 2;
    }
    return changed;
  }

  CaseSpec cur_;
  const DebuggerFactory& make_;
  const CampaignConfig& cfg_;
  ReduceOptions opt_;
  std::chrono::steady_clock::time_point start_;
  Category category_ = Category::Termination;
  CaseOutcome outcome_;
  int checks_ = 0;
};

}  // namespace

std::vector<CaseSpec> single_node_removals(const CaseSpec& spec) {
  std::vector<CaseSpec> out;
  for (const auto& l : enumerate_lists(spec.seed))
    for (const auto& span : l.spans)
      if (auto c = delete_lines(spec, {span}, false)) out.push_back(std::move(*c));
  return out;
}

ReduceResult reduce_case(const CaseSpec& spec, const DebuggerFactory& make, const CampaignConfig& cfg,
                         const ReduceOptions& opt) {
  return Reducer(spec, make, cfg, opt).run();
}

}  // namespace hdldiff
