#include "oracles.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace sheetaudit::testgen {

namespace {

Value naive_coerce(const Value& v) {
    if (v.is_number() || v.is_error()) return v;
    if (v.is_empty()) return Value::number(0);
    return Value::error(EvalError::Type);
}

Value naive_cell(const ValueMap& values, CellRef ref) {
    auto it = values.find(ref);
    return it == values.end() ? Value::empty() : it->second;
}

Value naive_eval(const ValueMap& values, const Expr& e) {
    if (const auto* n = std::get_if<NumberLit>(&e.node)) return Value::number(n->value);
    if (const auto* t = std::get_if<TextLit>(&e.node)) return Value::text(t->text);
    if (const auto* r = std::get_if<RefNode>(&e.node)) return naive_cell(values, r->ref);
    if (std::get_if<RangeNode>(&e.node)) return Value::error(EvalError::BadRef);
    if (const auto* u = std::get_if<UnaryNeg>(&e.node)) {
        Value v = naive_coerce(naive_eval(values, *u->operand));
        if (v.is_error()) return v;
        return Value::number(-v.number());
    }
    if (const auto* b = std::get_if<BinaryExpr>(&e.node)) {
        Value lhs = naive_coerce(naive_eval(values, *b->lhs));
        if (lhs.is_error()) return lhs;
        Value rhs = naive_coerce(naive_eval(values, *b->rhs));
        if (rhs.is_error()) return rhs;
        switch (b->op) {
            case BinOp::Add: return Value::number(lhs.number() + rhs.number());
            case BinOp::Sub: return Value::number(lhs.number() - rhs.number());
            case BinOp::Mul: return Value::number(lhs.number() * rhs.number());
            case BinOp::Div:
                return rhs.number() == 0 ? Value::error(EvalError::Div0)
                                         : Value::number(lhs.number() / rhs.number());
        }
    }
    const auto& call = std::get<FuncCall>(e.node);
    if (call.fn == Func::Sum) {
        double total = 0;
        for (const auto& arg : call.args) {
            if (const auto* range = std::get_if<RangeNode>(&arg->node)) {
                for (CellRef ref : range->range.cells()) {
                    Value v = naive_coerce(naive_cell(values, ref));
                    if (v.is_error()) return v;
                    total += v.number();
                }
            } else {
                Value v = naive_coerce(naive_eval(values, *arg));
                if (v.is_error()) return v;
                total += v.number();
            }
        }
        return Value::number(total);
    }
    Value key = naive_eval(values, *call.args[0]);
    if (key.is_error()) return key;
    if (key.is_empty()) return Value::error(EvalError::BadRef);
    RangeRef keys = std::get<RangeNode>(call.args[1]->node).range;
    RangeRef results = std::get<RangeNode>(call.args[2]->node).range;
    if (!keys.single_line() || !results.single_line() || keys.size() != results.size())
        return Value::error(EvalError::BadRef);
    auto kc = keys.cells();
    auto rc = results.cells();
    for (std::size_t i = 0; i < kc.size(); ++i) {
        Value cand = naive_cell(values, kc[i]);
        if (cand.is_error()) return cand;
        bool match =
            (key.is_number() && cand.is_number() && std::fabs(key.number() - cand.number()) <= 0.005) ||
            (key.is_text() && cand.is_text() && key.text() == cand.text());
        if (match) {
            Value out = naive_cell(values, rc[i]);
            return out.is_empty() ? Value::number(0) : out;
        }
    }
    return Value::error(EvalError::BadRef);
}

}  // namespace

ValueMap fixed_point_oracle(const Workbook& wb) {
    ValueMap values;
    for (const auto& [ref, cell] : wb.cells()) {
        if (cell.is_number()) values[ref] = Value::number(cell.number().value);
        if (cell.is_text()) values[ref] = Value::text(cell.text().text);
    }
    for (int pass = 0; pass < 10000; ++pass) {
        bool changed = false;
        for (const auto& [ref, cell] : wb.cells()) {
            if (!cell.is_formula()) continue;
            Value next = naive_eval(values, *cell.formula().ast);
            auto it = values.find(ref);
            if (it == values.end() || !(it->second == next)) {
                values[ref] = next;
                changed = true;
            }
        }
        if (!changed) return values;
    }
    throw std::logic_error("fixed-point oracle did not converge (cyclic sheet?)");
}

std::set<CellRef> expected_cycle_cells(const Workbook& wb) {
    std::map<CellRef, std::set<CellRef>> reads;
    for (const auto& [ref, cell] : wb.cells()) {
        if (!cell.is_formula()) continue;
        auto& out = reads[ref];
        visit_refs(*cell.formula().ast, [&](const CellRef& r) { out.insert(r); });
        visit_ranges(*cell.formula().ast, [&](const RangeRef& range) {
            for (CellRef r : range.cells()) out.insert(r);
        });
    }
    auto reaches = [&](CellRef from, CellRef to) {
        std::set<CellRef> seen;
        std::function<bool(CellRef)> go = [&](CellRef cur) {
            if (!seen.insert(cur).second) return false;
            auto it = reads.find(cur);
            if (it == reads.end()) return false;
            if (it->second.contains(to)) return true;
            for (CellRef next : it->second)
                if (go(next)) return true;
            return false;
        };
        return go(from);
    };
    std::set<CellRef> on_cycle;
    for (const auto& [ref, r] : reads)
        if (reaches(ref, ref)) on_cycle.insert(ref);
    std::set<CellRef> result = on_cycle;
    for (const auto& [ref, r] : reads) {
        if (result.contains(ref)) continue;
        for (CellRef target : on_cycle)
            if (reaches(ref, target)) {
                result.insert(ref);
                break;
            }
    }
    return result;
}

}  // namespace sheetaudit::testgen
