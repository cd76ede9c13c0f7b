#include "sheetaudit/evaluate.hpp"

#include <cmath>
#include <deque>

namespace sheetaudit {

namespace {

// Numeric coercion: numbers pass through, empty reads as 0, text is a
// TYPE error, errors propagate unchanged.
Value coerce_number(const Value& v) {
    if (v.is_number()) return v;
    if (v.is_empty()) return Value::number(0.0);
    if (v.is_text()) return Value::error(EvalError::Type);
    return v;
}

class Evaluator {
public:
    explicit Evaluator(const Workbook& wb, const ValueMap& values) : wb_(wb), values_(values) {}

    Value eval(const Expr& e) const {
        return std::visit(
            [&](const auto& node) -> Value {
                using T = std::decay_t<decltype(node)>;
                if constexpr (std::is_same_v<T, NumberLit>) {
                    return Value::number(node.value);
                } else if constexpr (std::is_same_v<T, TextLit>) {
                    return Value::text(node.text);
                } else if constexpr (std::is_same_v<T, RefNode>) {
                    return cell_value(node.ref);
                } else if constexpr (std::is_same_v<T, RangeNode>) {
                    // Bare ranges only occur as function arguments;
                    // reaching one here means a malformed tree.
                    return Value::error(EvalError::BadRef);
                } else if constexpr (std::is_same_v<T, UnaryNeg>) {
                    Value v = coerce_number(eval(*node.operand));
                    if (v.is_error()) return v;
                    return Value::number(-v.number());
                } else if constexpr (std::is_same_v<T, BinaryExpr>) {
                    return eval_binary(node);
                } else {
                    return node.fn == Func::Sum ? eval_sum(node) : eval_lookup(node);
                }
            },
            e.node);
    }

private:
    const Workbook& wb_;
    const ValueMap& values_;

    Value cell_value(CellRef ref) const {
        auto it = values_.find(ref);
        return it == values_.end() ? Value::empty() : it->second;
    }

    Value eval_binary(const BinaryExpr& node) const {
        Value lhs = coerce_number(eval(*node.lhs));
        if (lhs.is_error()) return lhs;
        Value rhs = coerce_number(eval(*node.rhs));
        if (rhs.is_error()) return rhs;
        double a = lhs.number(), b = rhs.number();
        switch (node.op) {
            case BinOp::Add: return Value::number(a + b);
            case BinOp::Sub: return Value::number(a - b);
            case BinOp::Mul: return Value::number(a * b);
            case BinOp::Div:
                if (b == 0.0) return Value::error(EvalError::Div0);
                return Value::number(a / b);
        }
        return Value::error(EvalError::Type);
    }

    Value eval_sum(const FuncCall& node) const {
        double total = 0;
        for (const auto& arg : node.args) {
            if (const auto* range = std::get_if<RangeNode>(&arg->node)) {
                for (CellRef ref : range->range.cells()) {
                    Value v = coerce_number(cell_value(ref));
                    if (v.is_error()) return v;
                    total += v.number();
                }
            } else {
                Value v = coerce_number(eval(*arg));
                if (v.is_error()) return v;
                total += v.number();
            }
        }
        return Value::number(total);
    }

    // Exact-match lookup: scan the key range in order, return the
    // parallel result cell of the first match. Numbers match within
    // the currency tolerance, text exactly. No match, an empty key, or
    // mismatched range shapes give BADREF.
    Value eval_lookup(const FuncCall& node) const {
        Value key = eval(*node.args[0]);
        if (key.is_error()) return key;
        if (key.is_empty()) return Value::error(EvalError::BadRef);

        const auto& keys = std::get<RangeNode>(node.args[1]->node).range;
        const auto& results = std::get<RangeNode>(node.args[2]->node).range;
        if (!keys.single_line() || !results.single_line() || keys.size() != results.size())
            return Value::error(EvalError::BadRef);

        auto key_cells = keys.cells();
        auto result_cells = results.cells();
        for (std::size_t i = 0; i < key_cells.size(); ++i) {
            Value candidate = cell_value(key_cells[i]);
            if (candidate.is_error()) return candidate;
            bool match = false;
            if (key.is_number() && candidate.is_number())
                match = std::fabs(key.number() - candidate.number()) <= 0.005;
            else if (key.is_text() && candidate.is_text())
                match = key.text() == candidate.text();
            if (match) {
                Value result = cell_value(result_cells[i]);
                return result.is_empty() ? Value::number(0.0) : result;
            }
        }
        return Value::error(EvalError::BadRef);
    }
};

}  // namespace

DependencyGraph DependencyGraph::build(const Workbook& wb) {
    DependencyGraph g;
    for (const auto& [ref, cell] : wb.cells()) {
        if (!cell.is_formula()) continue;
        std::set<CellRef> reads;
        visit_refs(*cell.formula().ast, [&](const CellRef& r) { reads.insert(r); });
        visit_ranges(*cell.formula().ast, [&](const RangeRef& range) {
            for (CellRef r : range.cells()) reads.insert(r);
        });
        auto& p = g.precedents[ref];
        p.assign(reads.begin(), reads.end());
        for (CellRef r : reads) g.dependents[r].push_back(ref);
    }
    return g;
}

std::set<CellRef> DependencyGraph::reachable_dependents(const std::set<CellRef>& roots) const {
    std::set<CellRef> seen;
    std::deque<CellRef> queue(roots.begin(), roots.end());
    while (!queue.empty()) {
        CellRef cur = queue.front();
        queue.pop_front();
        auto it = dependents.find(cur);
        if (it == dependents.end()) continue;
        for (CellRef next : it->second) {
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    for (CellRef r : roots) seen.erase(r);
    return seen;
}

std::set<CellRef> DependencyGraph::reachable_precedents(CellRef cell) const {
    std::set<CellRef> seen;
    std::deque<CellRef> queue{cell};
    while (!queue.empty()) {
        CellRef cur = queue.front();
        queue.pop_front();
        auto it = precedents.find(cur);
        if (it == precedents.end()) continue;
        for (CellRef next : it->second) {
            if (seen.insert(next).second) queue.push_back(next);
        }
    }
    seen.erase(cell);
    return seen;
}

ValueMap evaluate(const Workbook& wb) {
    DependencyGraph graph = DependencyGraph::build(wb);

    // Kahn's algorithm over formula cells. Only edges to cells that
    // carry content count toward the in-degree: a reference to a blank
    // position is the constant 0. Whatever never reaches in-degree 0
    // sits on a cycle or downstream of one.
    std::map<CellRef, int> indegree;
    for (const auto& [ref, cell] : wb.cells()) {
        if (!cell.is_formula()) continue;
        int n = 0;
        for (CellRef p : graph.precedents[ref])
            if (const Cell* c = wb.cell(p); c && c->is_formula()) ++n;
        indegree[ref] = n;
    }

    ValueMap values;
    std::deque<CellRef> ready;
    for (const auto& [ref, cell] : wb.cells()) {
        if (cell.is_number())
            values[ref] = Value::number(cell.number().value);
        else if (cell.is_text())
            values[ref] = Value::text(cell.text().text);
        else if (cell.is_formula() && indegree[ref] == 0)
            ready.push_back(ref);
    }

    std::size_t processed = 0;
    while (!ready.empty()) {
        CellRef ref = ready.front();
        ready.pop_front();
        ++processed;
        values[ref] = Evaluator(wb, values).eval(*wb.cell(ref)->formula().ast);
        auto it = graph.dependents.find(ref);
        if (it == graph.dependents.end()) continue;
        for (CellRef dep : it->second)
            if (auto d = indegree.find(dep); d != indegree.end() && --d->second == 0)
                ready.push_back(dep);
    }

    if (processed < indegree.size()) {
        for (const auto& [ref, deg] : indegree)
            if (!values.contains(ref)) values[ref] = Value::error(EvalError::Cycle);
    }
    return values;
}

std::set<CellRef> precedents(const Workbook& wb, CellRef cell) {
    const Cell* c = wb.cell(cell);
    if (!c || !c->is_formula()) return {};
    std::set<CellRef> out;
    visit_refs(*c->formula().ast, [&](const CellRef& r) { out.insert(r); });
    visit_ranges(*c->formula().ast, [&](const RangeRef& range) {
        for (CellRef r : range.cells()) out.insert(r);
    });
    return out;
}

std::set<CellRef> dependents(const Workbook& wb, CellRef cell) {
    if (!wb.cell(cell)) return {};
    std::set<CellRef> out;
    for (const auto& [ref, c] : wb.cells()) {
        if (!c.is_formula()) continue;
        if (precedents(wb, ref).contains(cell)) out.insert(ref);
    }
    return out;
}

}  // namespace sheetaudit
