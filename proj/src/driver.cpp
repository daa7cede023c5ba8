#include "setsynth/driver.hpp"

#include <algorithm>
#include <set>

#include "setsynth/machine.hpp"
#include "setsynth/oracle.hpp"
#include "setsynth/source.hpp"
#include "setsynth/synthesis.hpp"

namespace setsynth::drive {

namespace {

void collect_set_refs(const Program& p, const ExprPtr& e, std::set<std::string>& out) {
  if (e->kind == ExprKind::FunApp) {
    auto callee = resolve_callee(p, e->name, /*allow_plural=*/true);
    if (callee && (callee->kind == Callee::Kind::SetFunction ||
                   callee->kind == Callee::Kind::PluralFunction)) {
      out.insert(callee->def->name);
    }
  }
  for (const ExprPtr& a : e->args) collect_set_refs(p, a, out);
}

size_t world_cap(const Options& opts) {
  return opts.max_values.value_or(static_cast<size_t>(100000));
}

std::vector<ValueMultiset> normalized_world_sets(const std::vector<rt::World>& worlds) {
  std::vector<ValueMultiset> out;
  for (const rt::World& w : worlds) {
    if (w.failed) continue;
    out.push_back(as_set(w.values));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<ValueMultiset> normalized_oracle_sets(const std::vector<ValueMultiset>& sets) {
  std::vector<ValueMultiset> out;
  out.reserve(sets.size());
  for (const ValueMultiset& s : sets) out.push_back(as_set(s));
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

std::vector<std::string> referenced_set_functions(const Program& p, const ExprPtr& entry) {
  std::set<std::string> targets;
  for (const FuncDef& f : p.func_defs) {
    for (const Rule& r : f.rules) collect_set_refs(p, r.body, targets);
  }
  if (entry) collect_set_refs(p, entry, targets);
  return {targets.begin(), targets.end()};
}

std::shared_ptr<const ir::IrBundle> build_bundle(const Program& p, const ExprPtr& entry,
                                                 const Options& opts) {
  synth::Options sopts;
  sopts.supply_threading = opts.supply_threading;
  auto bundle = std::make_shared<ir::IrBundle>(
      synth::emit_program(p, referenced_set_functions(p, entry), sopts));
  return bundle;
}

Result run_entry(const Program& p, const ExprPtr& entry, const Options& opts) {
  Result out;

  auto run_oracle = [&]() {
    auto r = oracle::enumerate_values(p, entry, opts.depth_bound);
    if (opts.max_values && r.values.size() > *opts.max_values) {
      r.values.resize(*opts.max_values);
    }
    return r;
  };

  auto run_synth = [&](Result& res) {
    auto bundle = build_bundle(p, entry, opts);
    auto host = std::make_shared<oracle::Evaluator>(
        p, oracle::Evaluator::Config{opts.depth_bound, 8'000'000});
    auto machine = std::make_shared<rt::Machine>(bundle, *host);
    rt::Machine::install(machine);

    // A direct set-function application streams its worlds lazily; plural
    // entries dump the normalized tree; anything else is host-evaluated with
    // synthesized set functions behind the scene.
    if (entry->kind == ExprKind::FunApp) {
      auto callee = resolve_callee(p, entry->name, /*allow_plural=*/true);
      if (callee && callee->kind == Callee::Kind::SetFunction) {
        std::vector<oracle::CellId> cells;
        for (const ExprPtr& a : entry->args) cells.push_back(host->alloc_entry_cell(a));
        rt::Tree collected = machine->set_function_collected(callee->def->name, cells);
        res.kind = Result::Kind::Worlds;
        res.worlds = machine->worlds(collected, opts.strategy, world_cap(opts),
                                     opts.max_values.value_or(SIZE_MAX));
        return;
      }
      if (callee && callee->kind == Callee::Kind::PluralFunction) {
        std::vector<rt::Tree> trees;
        for (const ExprPtr& a : entry->args) {
          trees.push_back(machine->to_st(host->alloc_entry_cell(a)));
        }
        rt::Tree t = machine->call_plural(callee->def->name + "P", std::move(trees));
        res.kind = Result::Kind::TreeDump;
        res.tree_dump = rt::dump_tree(rt::nf_st(t, machine->nf()));
        return;
      }
    }
    oracle::CellId root = host->alloc_entry_cell(entry);
    auto r = host->enumerate(root);
    res.kind = Result::Kind::Values;
    res.values = std::move(r.values);
    res.truncated = r.truncated;
    if (opts.max_values && res.values.size() > *opts.max_values) {
      res.values.resize(*opts.max_values);
    }
  };

  switch (opts.mode) {
    case Mode::Oracle: {
      auto r = run_oracle();
      out.kind = Result::Kind::Values;
      out.values = std::move(r.values);
      out.truncated = r.truncated;
      return out;
    }
    case Mode::Synth: {
      run_synth(out);
      return out;
    }
    case Mode::Diff: {
      out.kind = Result::Kind::Diff;
      Result synth_res;
      run_synth(synth_res);
      if (synth_res.kind == Result::Kind::TreeDump) {
        throw EvalError("diff mode cannot compare a plural-function entry");
      }
      if (synth_res.kind == Result::Kind::Worlds) {
        out.compared_sets = true;
        out.synth_side = normalized_world_sets(synth_res.worlds);
        auto callee = resolve_callee(p, entry->name, false);
        std::vector<ExprPtr> args(entry->args.begin(), entry->args.end());
        auto oracle_res =
            oracle::set_function_oracle(p, callee->def->name, args, opts.depth_bound);
        out.truncated = oracle_res.truncated;
        out.oracle_side = normalized_oracle_sets(oracle_res.sets);
      } else {
        auto oracle_res = run_oracle();
        out.truncated = oracle_res.truncated || synth_res.truncated;
        out.synth_side = {as_set(synth_res.values)};
        out.oracle_side = {as_set(oracle_res.values)};
      }
      out.match = out.synth_side == out.oracle_side;
      return out;
    }
  }
  throw EvalError("unreachable");
}

}  // namespace setsynth::drive
