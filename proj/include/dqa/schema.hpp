#ifndef DQA_SCHEMA_HPP
#define DQA_SCHEMA_HPP

#include "dataset.hpp"

#include <cctype>
#include <map>
#include <set>
#include <sstream>

namespace dqa {

/// One additive term of a rule expression.
struct Term {
    enum class Kind { column, constant, product, quotient };
    Kind kind = Kind::constant;
    std::string a; // column name (column, product, quotient)
    std::string b; // second column (product, quotient)
    double value = 0.0;

    friend bool operator==(const Term&, const Term&) = default;
};

/// Sum of terms. A single term with `all_columns` set stands for "every
/// feature column" and is only valid on the left-hand side.
struct Expr {
    std::vector<Term> terms;
    bool all_columns = false;

    friend bool operator==(const Expr&, const Expr&) = default;

    std::vector<std::string> columns() const {
        std::vector<std::string> out;
        for (const auto& t : terms) {
            if (t.kind != Term::Kind::constant) {
                out.push_back(t.a);
            }
            if (t.kind == Term::Kind::product || t.kind == Term::Kind::quotient) {
                out.push_back(t.b);
            }
        }
        return out;
    }
};

enum class Comparator { ge, eq, le };

inline const char* to_string(Comparator c) {
    switch (c) {
    case Comparator::ge:
        return ">=";
    case Comparator::eq:
        return "=";
    case Comparator::le:
        return "<=";
    }
    return "?";
}

struct SchemaRule {
    std::string id;
    Expr lhs;
    Comparator comparator = Comparator::ge;
    Expr rhs;
    std::string description;
    std::size_t line = 0;

    std::vector<std::string> referenced_columns() const {
        auto out = lhs.columns();
        auto r = rhs.columns();
        out.insert(out.end(), r.begin(), r.end());
        return out;
    }
};

inline std::string to_string(const Expr& e) {
    if (e.all_columns) {
        return "*";
    }
    std::string out;
    for (std::size_t i = 0; i < e.terms.size(); ++i) {
        const auto& t = e.terms[i];
        if (i) {
            out += " + ";
        }
        switch (t.kind) {
        case Term::Kind::column:
            out += t.a;
            break;
        case Term::Kind::constant:
            out += format_double(t.value);
            break;
        case Term::Kind::product:
            out += t.a + " * " + t.b;
            break;
        case Term::Kind::quotient:
            out += t.a + " / " + t.b;
            break;
        }
    }
    return out;
}

inline std::string to_string(const SchemaRule& r) {
    return r.id + ": " + to_string(r.lhs) + " " + to_string(r.comparator) + " " + to_string(r.rhs);
}

namespace detail {

class RuleLexer {
public:
    RuleLexer(std::string_view text, std::size_t line) : text_(text), line_(line) {}

    [[noreturn]] void fail(const std::string& what) const {
        throw Error("rule syntax error at line " + std::to_string(line_) + ", column " + std::to_string(pos_ + 1) + ": " + what);
    }

    void skip_space() {
        while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r')) {
            ++pos_;
        }
    }

    bool at_end() {
        skip_space();
        return pos_ >= text_.size();
    }

    char peek() {
        skip_space();
        return pos_ < text_.size() ? text_[pos_] : '\0';
    }

    bool consume(std::string_view tok) {
        skip_space();
        if (text_.substr(pos_, tok.size()) == tok) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    static bool ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
    static bool ident_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; }

    std::optional<std::string> identifier() {
        skip_space();
        if (pos_ >= text_.size() || !ident_start(text_[pos_])) {
            return std::nullopt;
        }
        const std::size_t start = pos_;
        while (pos_ < text_.size() && ident_char(text_[pos_])) {
            ++pos_;
        }
        return std::string(text_.substr(start, pos_ - start));
    }

    std::optional<double> number() {
        skip_space();
        std::size_t end = pos_;
        if (end < text_.size() && (text_[end] == '-' || text_[end] == '+')) {
            ++end;
        }
        bool digits = false;
        while (end < text_.size() && (std::isdigit(static_cast<unsigned char>(text_[end])) || text_[end] == '.' ||
                                      text_[end] == 'e' || text_[end] == 'E' ||
                                      ((text_[end] == '-' || text_[end] == '+') && (text_[end - 1] == 'e' || text_[end - 1] == 'E')))) {
            digits = digits || std::isdigit(static_cast<unsigned char>(text_[end]));
            ++end;
        }
        if (!digits) {
            return std::nullopt;
        }
        double v = 0.0;
        if (!parse_double(text_.substr(pos_, end - pos_), v)) {
            fail("malformed number");
        }
        pos_ = end;
        return v;
    }

    Term term() {
        if (auto v = number()) {
            return Term{Term::Kind::constant, {}, {}, *v};
        }
        auto a = identifier();
        if (!a) {
            fail("expected column name or constant");
        }
        Term t{Term::Kind::column, *a, {}, 0.0};
        if (consume("*")) {
            t.kind = Term::Kind::product;
        } else if (consume("/")) {
            t.kind = Term::Kind::quotient;
        } else {
            return t;
        }
        auto b = identifier();
        if (!b) {
            fail("expected column name after operator");
        }
        t.b = *b;
        return t;
    }

    Expr expr(bool allow_wildcard) {
        Expr e;
        if (allow_wildcard && consume("*")) {
            e.all_columns = true;
            return e;
        }
        const bool paren = consume("(");
        e.terms.push_back(term());
        while (consume("+")) {
            e.terms.push_back(term());
        }
        if (paren && !consume(")")) {
            fail("expected ')'");
        }
        return e;
    }

    Comparator comparator() {
        if (consume(">=")) {
            return Comparator::ge;
        }
        if (consume("<=")) {
            return Comparator::le;
        }
        if (consume("==") || consume("=")) {
            return Comparator::eq;
        }
        fail("expected comparator (>=, =, <=)");
    }

    std::size_t pos_ = 0;

private:
    std::string_view text_;
    std::size_t line_;
};

inline Expr col(std::string name) {
    return Expr{{Term{Term::Kind::column, std::move(name), {}, 0.0}}, false};
}

inline Expr sum(std::initializer_list<std::string> names) {
    Expr e;
    for (const auto& n : names) {
        e.terms.push_back(Term{Term::Kind::column, n, {}, 0.0});
    }
    return e;
}

} // namespace detail

/**
 * Parses the rule DSL: one rule per line, `ID: EXPR (>=|=|<=) EXPR`, where
 * EXPR is a `+`-separated sum of columns, constants, `col * col` or
 * `col / col`, optionally wrapped in one pair of parentheses. `#` starts a
 * comment. A lone `*` on the left-hand side means "every feature column".
 */
inline std::vector<SchemaRule> parse_rules(std::string_view text) {
    std::vector<SchemaRule> rules;
    std::set<std::string> ids;
    std::size_t line_no = 0;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto end = text.find('\n', start);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        std::string_view line = text.substr(start, end - start);
        start = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            if (end == text.size()) {
                break;
            }
            continue;
        }
        detail::RuleLexer lex(line, line_no);
        auto id = lex.identifier();
        if (!id) {
            lex.fail("expected rule id");
        }
        if (!lex.consume(":")) {
            lex.fail("expected ':' after rule id");
        }
        SchemaRule rule;
        rule.id = *id;
        rule.line = line_no;
        rule.lhs = lex.expr(true);
        rule.comparator = lex.comparator();
        if (lex.at_end()) {
            lex.fail("missing right-hand side");
        }
        rule.rhs = lex.expr(false);
        if (!lex.at_end()) {
            lex.fail("unexpected trailing input");
        }
        if (!ids.insert(rule.id).second) {
            throw Error("duplicate rule id '" + rule.id + "' at line " + std::to_string(line_no));
        }
        rules.push_back(std::move(rule));
        if (end == text.size()) {
            break;
        }
    }
    return rules;
}

/// The twenty SDP schema rules (R1 applies to every metric column).
inline std::vector<SchemaRule> builtin_sdp_rules() {
    using detail::col;
    using detail::sum;
    using C = Comparator;
    auto rule = [](std::string id, Expr lhs, C c, Expr rhs, std::string desc) {
        return SchemaRule{std::move(id), std::move(lhs), c, std::move(rhs), std::move(desc), 0};
    };
    Expr all;
    all.all_columns = true;
    Expr zero{{Term{Term::Kind::constant, {}, {}, 0.0}}, false};
    Expr ratio{{Term{Term::Kind::quotient, "CountLineComment", "CountLineCode", 0.0}}, false};
    return {
        rule("R1", all, C::ge, zero, "All metrics are non-negative"),
        rule("R2", col("CountLine"), C::ge, col("CountLineComment"), "Physical lines >= comment lines"),
        rule("R3", col("CountLine"), C::ge, col("AvgLine"), "Physical lines >= average lines"),
        rule("R4", col("CountLine"), C::ge, col("CountLineCodeDecl"), "Physical lines >= declarative lines"),
        rule("R5", col("CountLine"), C::ge, col("CountLineCodeExe"), "Physical lines >= executable lines"),
        rule("R6", col("CountLine"), C::ge, col("CountStmt"), "Physical lines >= statements"),
        rule("R7", col("CountLine"), C::ge, col("CountLineBlank"), "Physical lines >= blank lines"),
        rule("R8", col("CountLine"), C::ge, sum({"CountLineBlank", "CountLineComment", "CountLineCodeDecl", "CountLineCodeExe"}),
             "Physical lines >= blank + comment + declarative + executable lines"),
        rule("R9", col("CountStmt"), C::eq, sum({"CountLineCodeDecl", "CountLineCodeExe"}),
             "Statements = declarative + executable statements"),
        rule("R10", col("RatioCommentToCode"), C::eq, ratio, "Comment-to-code ratio = comment lines / code lines"),
        rule("R11", col("AvgLine"), C::ge, col("AvgLineCode"), "Average lines >= average code lines"),
        rule("R12", col("AvgLine"), C::ge, col("AvgLineComment"), "Average lines >= average comment lines"),
        rule("R13", col("AvgLine"), C::ge, col("AvgLineBlank"), "Average lines >= average blank lines"),
        rule("R14", col("AvgLine"), C::ge, sum({"AvgLineCode", "AvgLineComment", "AvgLineBlank"}),
             "Average lines >= average code + comment + blank lines"),
        rule("R15", col("SumCyclomatic"), C::ge, col("MaxCyclomatic"), "Sum cyclomatic >= max cyclomatic"),
        rule("R16", col("SumCyclomaticStrict"), C::ge, col("MaxCyclomaticStrict"), "Sum strict cyclomatic >= max strict cyclomatic"),
        rule("R17", col("SumCyclomaticModified"), C::ge, col("MaxCyclomaticModified"),
             "Sum modified cyclomatic >= max modified cyclomatic"),
        rule("R18", col("MaxCyclomatic"), C::ge, col("AvgCyclomatic"), "Max cyclomatic >= average cyclomatic"),
        rule("R19", col("MaxCyclomaticStrict"), C::ge, col("AvgCyclomaticStrict"), "Max strict cyclomatic >= average strict cyclomatic"),
        rule("R20", col("MaxCyclomaticModified"), C::ge, col("AvgCyclomaticModified"),
             "Max modified cyclomatic >= average modified cyclomatic"),
    };
}

/// Rules whose columns all exist in `ds`; the others are reported in `skipped`.
inline std::vector<SchemaRule> applicable_rules(const std::vector<SchemaRule>& rules, const Dataset& ds,
                                                std::vector<std::string>* skipped = nullptr) {
    std::vector<SchemaRule> out;
    for (const auto& r : rules) {
        bool ok = true;
        for (const auto& c : r.referenced_columns()) {
            ok = ok && ds.find(c).has_value();
        }
        if (ok) {
            out.push_back(r);
        } else if (skipped) {
            skipped->push_back(r.id);
        }
    }
    return out;
}

struct ViolationReport {
    std::map<std::string, std::vector<std::size_t>> violations; // rule id -> sorted row positions
    std::vector<std::string> rule_order;
    std::vector<std::size_t> violating_rows; // distinct, sorted
    std::size_t total_violating_rows() const { return violating_rows.size(); }
};

namespace detail {

struct BoundTerm {
    Term::Kind kind;
    std::size_t a = 0, b = 0;
    double value = 0.0;
};

inline std::vector<BoundTerm> bind(const Expr& e, const Dataset& ds) {
    std::vector<BoundTerm> out;
    for (const auto& t : e.terms) {
        BoundTerm bt{t.kind, 0, 0, t.value};
        if (t.kind != Term::Kind::constant) {
            bt.a = ds.index_of(t.a);
        }
        if (t.kind == Term::Kind::product || t.kind == Term::Kind::quotient) {
            bt.b = ds.index_of(t.b);
        }
        out.push_back(bt);
    }
    return out;
}

// Returns nullopt when a referenced cell is missing; sets div_zero on x / 0.
inline std::optional<double> evaluate(const std::vector<BoundTerm>& terms, const Dataset& ds, std::size_t row, bool& div_zero) {
    double total = 0.0;
    for (const auto& t : terms) {
        switch (t.kind) {
        case Term::Kind::constant:
            total += t.value;
            break;
        case Term::Kind::column:
            if (ds.is_missing(row, t.a)) {
                return std::nullopt;
            }
            total += ds.value(row, t.a);
            break;
        case Term::Kind::product:
        case Term::Kind::quotient: {
            if (ds.is_missing(row, t.a) || ds.is_missing(row, t.b)) {
                return std::nullopt;
            }
            const double x = ds.value(row, t.a);
            const double y = ds.value(row, t.b);
            if (t.kind == Term::Kind::product) {
                total += x * y;
            } else if (y == 0.0) {
                div_zero = true;
            } else {
                total += x / y;
            }
            break;
        }
        }
    }
    return total;
}

inline bool holds(double lhs, Comparator c, double rhs, double eq_tolerance) {
    switch (c) {
    case Comparator::ge:
        return lhs >= rhs;
    case Comparator::le:
        return lhs <= rhs;
    case Comparator::eq:
        return std::fabs(lhs - rhs) <= eq_tolerance * std::max(1.0, std::fabs(rhs));
    }
    return false;
}

} // namespace detail

/**
 * Evaluates every rule on every row. Equality uses a relative tolerance;
 * rows with a missing cell in a referenced column are skipped for that
 * rule; a zero denominator counts as a violation.
 */
inline ViolationReport check_schema(const Dataset& ds, const std::vector<SchemaRule>& rules, double eq_tolerance = 1e-9) {
    ViolationReport report;
    std::set<std::size_t> any;
    for (const auto& rule : rules) {
        report.rule_order.push_back(rule.id);
        auto& rows = report.violations[rule.id];
        if (rule.lhs.all_columns) {
            auto rhs = detail::bind(rule.rhs, ds);
            for (std::size_t i = 0; i < ds.rows(); ++i) {
                bool div_zero = false;
                auto r = detail::evaluate(rhs, ds, i, div_zero);
                if (!r) {
                    continue;
                }
                bool violated = div_zero;
                for (std::size_t j = 0; j < ds.cols() && !violated; ++j) {
                    if (!ds.is_missing(i, j) && !detail::holds(ds.value(i, j), rule.comparator, *r, eq_tolerance)) {
                        violated = true;
                    }
                }
                if (violated) {
                    rows.push_back(i);
                }
            }
        } else {
            auto lhs = detail::bind(rule.lhs, ds);
            auto rhs = detail::bind(rule.rhs, ds);
            for (std::size_t i = 0; i < ds.rows(); ++i) {
                bool div_zero = false;
                auto l = detail::evaluate(lhs, ds, i, div_zero);
                auto r = detail::evaluate(rhs, ds, i, div_zero);
                if (!l || !r) {
                    continue;
                }
                if (div_zero || !detail::holds(*l, rule.comparator, *r, eq_tolerance)) {
                    rows.push_back(i);
                }
            }
        }
        any.insert(rows.begin(), rows.end());
    }
    report.violating_rows.assign(any.begin(), any.end());
    return report;
}

} // namespace dqa

#endif
