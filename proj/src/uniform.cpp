#include "setsynth/uniform.hpp"

#include <algorithm>
#include <optional>
#include <set>
#include <string>

namespace setsynth {
namespace {

[[noreturn]] void reject(const Rule& r, const std::string& fn, const std::string& why) {
  throw CompileError(r.pos, "function '" + fn + "': " + why);
}

void check_linear(const FuncDef& f, const Rule& r) {
  std::set<std::string> seen;
  auto visit = [&](const Pattern& p, auto&& self) -> void {
    if (p.is_var) {
      if (!seen.insert(p.name).second) {
        reject(r, f.name, "non-linear left-hand side (variable '" + p.name + "' repeated)");
      }
      return;
    }
    for (const Pattern& a : p.args) self(a, self);
  };
  for (const Pattern& p : r.patterns) visit(p, visit);
}

// The one constructor-pattern position of a rule, if any. Nested constructor
// patterns and multi-position matches are front-end errors.
std::optional<int> match_position(const FuncDef& f, const Rule& r) {
  std::optional<int> pos;
  for (int i = 0; i < static_cast<int>(r.patterns.size()); ++i) {
    const Pattern& p = r.patterns[i];
    if (p.is_var) continue;
    for (const Pattern& a : p.args) {
      if (!a.is_var) reject(r, f.name, "nested pattern");
    }
    if (pos) reject(r, f.name, "patterns on more than one argument position");
    pos = i;
  }
  return pos;
}

ExprPtr merge_choice(std::vector<ExprPtr> bodies, SourcePos pos) {
  ExprPtr out = bodies.back();
  for (auto it = bodies.rbegin() + 1; it != bodies.rend(); ++it) {
    out = Expr::choice(*it, out, pos);
  }
  return out;
}

std::string fresh_name(const std::string& base, std::set<std::string>& used) {
  std::string name = base;
  int n = 0;
  while (used.count(name)) name = base + std::to_string(++n);
  used.insert(name);
  return name;
}

FuncDef uniformize_function(const Program& p, const FuncDef& f) {
  for (const Rule& r : f.rules) check_linear(f, r);

  std::optional<int> common_pos;
  std::vector<std::optional<int>> rule_pos(f.rules.size());
  for (size_t i = 0; i < f.rules.size(); ++i) {
    rule_pos[i] = match_position(f, f.rules[i]);
    if (rule_pos[i]) {
      if (common_pos && *common_pos != *rule_pos[i]) {
        reject(f.rules[i], f.name, "patterns on more than one argument position");
      }
      common_pos = rule_pos[i];
    }
  }

  FuncDef out;
  out.pos = f.pos;
  out.name = f.name;
  out.arity = f.arity;

  if (!common_pos) {
    // Variable-only rules: merge into one rule, textual order.
    const Rule& first = f.rules.front();
    std::vector<std::string> canon;
    for (const Pattern& p : first.patterns) canon.push_back(p.name);
    std::vector<ExprPtr> bodies;
    for (const Rule& r : f.rules) {
      std::vector<std::pair<std::string, std::string>> renaming;
      for (size_t i = 0; i < canon.size(); ++i) {
        if (r.patterns[i].name != canon[i]) renaming.emplace_back(r.patterns[i].name, canon[i]);
      }
      bodies.push_back(rename_vars(r.body, renaming));
    }
    Rule merged;
    merged.pos = first.pos;
    for (size_t i = 0; i < canon.size(); ++i) {
      merged.patterns.push_back(Pattern::variable(canon[i], first.patterns[i].pos));
    }
    merged.body = bodies.size() == 1 ? bodies[0] : merge_choice(std::move(bodies), first.pos);
    out.rules.push_back(std::move(merged));
    return out;
  }

  const int k = *common_pos;
  const DataDecl* type = nullptr;
  for (size_t i = 0; i < f.rules.size(); ++i) {
    if (!rule_pos[i]) continue;
    const DataDecl* d = p.find_constructor(f.rules[i].patterns[k].name);
    if (type && d != type) {
      reject(f.rules[i], f.name, "rules match constructors of different types");
    }
    type = d;
  }

  // Canonical variable names for the non-matched positions come from the
  // first rule; constructor argument names from the first rule mentioning
  // that constructor, freshened on clashes.
  const Rule& first = f.rules.front();
  std::set<std::string> used;
  std::vector<std::string> canon(f.arity);
  for (int i = 0; i < f.arity; ++i) {
    if (i == k) continue;
    canon[i] = first.patterns[i].is_var ? first.patterns[i].name : std::string("_p") + std::to_string(i);
    used.insert(canon[i]);
  }

  for (const ConDecl& con : type->constructors) {
    std::vector<std::string> con_vars;
    for (size_t i = 0; i < f.rules.size(); ++i) {
      if (rule_pos[i] && f.rules[i].patterns[k].name == con.name) {
        std::set<std::string> local = used;
        for (const Pattern& a : f.rules[i].patterns[k].args) {
          con_vars.push_back(fresh_name(a.name, local));
        }
        break;
      }
    }
    if (con_vars.empty()) {
      std::set<std::string> local = used;
      for (int j = 0; j < con.arity(); ++j) {
        con_vars.push_back(fresh_name("_a" + std::to_string(j), local));
      }
    }

    std::vector<ExprPtr> bodies;
    for (size_t i = 0; i < f.rules.size(); ++i) {
      const Rule& r = f.rules[i];
      if (rule_pos[i]) {
        if (r.patterns[k].name != con.name) continue;
        std::vector<std::pair<std::string, std::string>> renaming;
        for (int j = 0; j < f.arity; ++j) {
          if (j == k) continue;
          if (r.patterns[j].name != canon[j]) renaming.emplace_back(r.patterns[j].name, canon[j]);
        }
        const std::vector<Pattern>& as = r.patterns[k].args;
        for (size_t j = 0; j < as.size(); ++j) {
          if (as[j].name != con_vars[j]) renaming.emplace_back(as[j].name, con_vars[j]);
        }
        bodies.push_back(rename_vars(r.body, renaming));
      } else {
        // A variable-only rule also fires for this constructor: rebuild the
        // matched argument from the bound pieces in its body. The matched
        // variable goes through a fresh temporary so the simultaneous rename
        // cannot capture it.
        std::vector<std::pair<std::string, std::string>> renaming;
        for (int j = 0; j < f.arity; ++j) {
          if (j == k) continue;
          if (r.patterns[j].name != canon[j]) renaming.emplace_back(r.patterns[j].name, canon[j]);
        }
        renaming.emplace_back(r.patterns[k].name, "_scrutinee");
        ExprPtr body = rename_vars(r.body, renaming);
        std::vector<ExprPtr> rebuilt_args;
        for (const std::string& v : con_vars) rebuilt_args.push_back(Expr::var(v, r.pos));
        ExprPtr rebuilt = Expr::con(con.name, std::move(rebuilt_args), r.pos);
        bodies.push_back(substitute_var(body, "_scrutinee", rebuilt));
      }
    }

    Rule rule;
    rule.pos = first.pos;
    for (int i = 0; i < f.arity; ++i) {
      if (i == k) {
        std::vector<Pattern> as;
        for (const std::string& v : con_vars) as.push_back(Pattern::variable(v, first.pos));
        rule.patterns.push_back(Pattern::construct(con.name, std::move(as), first.pos));
      } else {
        rule.patterns.push_back(Pattern::variable(canon[i], first.pos));
      }
    }
    rule.body = bodies.empty()   ? Expr::failed(first.pos)
                : bodies.size() == 1 ? bodies[0]
                                     : merge_choice(std::move(bodies), first.pos);
    out.rules.push_back(std::move(rule));
  }
  return out;
}

}  // namespace

Program uniformize(const Program& p) {
  Program out;
  out.data_decls = p.data_decls;
  for (const FuncDef& f : p.func_defs) {
    if (f.rules.empty()) continue;
    out.func_defs.push_back(uniformize_function(p, f));
  }
  return out;
}

std::vector<Diagnostic> validate_uniform(const Program& p) {
  std::vector<Diagnostic> diags;
  auto report = [&](const FuncDef& f, size_t rule_idx, const std::string& msg) {
    diags.push_back(Diagnostic{
        f.rules.empty() ? f.pos : f.rules[std::min(rule_idx, f.rules.size() - 1)].pos,
        "function '" + f.name + "', rule " + std::to_string(rule_idx + 1) + ": " + msg});
  };

  for (const FuncDef& f : p.func_defs) {
    if (f.rules.empty()) {
      diags.push_back(Diagnostic{f.pos, "function '" + f.name + "' has no rules"});
      continue;
    }
    // linearity
    for (size_t i = 0; i < f.rules.size(); ++i) {
      std::set<std::string> seen;
      bool linear = true;
      auto visit = [&](const Pattern& pat, auto&& self) -> void {
        if (pat.is_var) {
          if (!seen.insert(pat.name).second) linear = false;
          return;
        }
        for (const Pattern& a : pat.args) self(a, self);
      };
      for (const Pattern& pat : f.rules[i].patterns) visit(pat, visit);
      if (!linear) report(f, i, "non-linear left-hand side");
    }

    std::optional<int> pos;
    bool shallow = true;
    bool single_position = true;
    for (size_t i = 0; i < f.rules.size(); ++i) {
      std::optional<int> rule_p;
      for (int j = 0; j < static_cast<int>(f.rules[i].patterns.size()); ++j) {
        const Pattern& pat = f.rules[i].patterns[j];
        if (pat.is_var) continue;
        for (const Pattern& a : pat.args) {
          if (!a.is_var) shallow = false;
        }
        if (rule_p) single_position = false;
        rule_p = j;
      }
      if (rule_p) {
        if (pos && *pos != *rule_p) single_position = false;
        pos = rule_p;
      }
    }
    if (!shallow) report(f, 0, "nested pattern");
    if (!single_position) report(f, 0, "matches more than one argument position");
    if (!shallow || !single_position) continue;

    if (!pos) {
      if (f.rules.size() != 1) {
        report(f, 1, "multiple variable-only rules (overlapping)");
      }
      continue;
    }
    if (!f.rules.empty() && !f.rules.front().patterns.empty()) {
      const DataDecl* type = nullptr;
      bool mixed = false;
      std::vector<std::string> seen_cons;
      bool all_con = true;
      for (size_t i = 0; i < f.rules.size(); ++i) {
        const Pattern& pat = f.rules[i].patterns[*pos];
        if (pat.is_var) {
          all_con = false;
          report(f, i, "variable rule overlaps constructor rules");
          continue;
        }
        const DataDecl* d = p.find_constructor(pat.name);
        if (!d) continue;  // parser normally guarantees this
        if (type && d != type) mixed = true;
        type = d;
        if (std::count(seen_cons.begin(), seen_cons.end(), pat.name)) {
          report(f, i, "more than one rule for constructor '" + pat.name + "'");
        }
        seen_cons.push_back(pat.name);
      }
      if (mixed) report(f, 0, "rules match constructors of different types");
      if (all_con && type && !mixed) {
        for (const ConDecl& c : type->constructors) {
          if (!std::count(seen_cons.begin(), seen_cons.end(), c.name)) {
            report(f, 0, "no rule for constructor '" + c.name + "'");
          }
        }
      }
    }
  }
  return diags;
}

}  // namespace setsynth
