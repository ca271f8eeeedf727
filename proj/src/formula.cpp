#include "mpsynth/formula.hpp"

#include <algorithm>
#include <cassert>
#include <cctype>

namespace mpsynth {

std::optional<uint32_t> Alphabet::index_of(std::string_view name) const {
    for (uint32_t i = 0; i < atoms.size(); ++i)
        if (atoms[i] == name) return i;
    return std::nullopt;
}

bool is_core_op(Op op) {
    switch (op) {
        case Op::True:
        case Op::False:
        case Op::Atom:
        case Op::Not:
        case Op::And:
        case Op::Or:
        case Op::Next:
        case Op::WeakNext:
        case Op::Until:
            return true;
        default:
            return false;
    }
}

FormulaFactory::FormulaFactory() {
    nodes_.push_back({Op::False, 0, 0});  // id 0
    nodes_.push_back({Op::True, 0, 0});   // id 1
}

static uint64_t node_key(Op op, uint32_t lhs, uint32_t rhs) {
    return (static_cast<uint64_t>(op) << 56) ^
           (static_cast<uint64_t>(lhs) << 28) ^ static_cast<uint64_t>(rhs);
}

Formula FormulaFactory::intern(Op op, uint32_t lhs, uint32_t rhs) {
    uint64_t key = node_key(op, lhs, rhs);
    auto it = unique_.find(key);
    if (it != unique_.end()) return {it->second};
    uint32_t id = static_cast<uint32_t>(nodes_.size());
    nodes_.push_back({op, lhs, rhs});
    unique_.emplace(key, id);
    return {id};
}

Formula FormulaFactory::atom(std::string_view name) {
    auto it = atom_ids_.find(std::string(name));
    uint32_t atom_id;
    if (it != atom_ids_.end()) {
        atom_id = it->second;
    } else {
        atom_id = static_cast<uint32_t>(atom_names_.size());
        atom_names_.emplace_back(name);
        atom_ids_.emplace(std::string(name), atom_id);
    }
    return intern(Op::Atom, atom_id, 0);
}

const std::string& FormulaFactory::atom_name(Formula f) const {
    assert(op(f) == Op::Atom);
    return atom_names_[nodes_[f.id].lhs];
}

Formula FormulaFactory::mk_not(Formula f) {
    if (f == fls()) return tru();
    if (f == tru()) return fls();
    if (op(f) == Op::Not) return lhs(f);
    return intern(Op::Not, f.id, 0);
}

// And/Or chains are flattened, sorted, deduplicated and checked for
// complementary literals; the canonical form is a right-leaning chain over
// ascending ids. This is what keeps the derivative construction's
// obligation space small: residuals that are Boolean rearrangements of the
// same operands collapse to one node.
Formula FormulaFactory::mk_junction(Op op, Formula a, Formula b) {
    const Formula absorb = op == Op::And ? fls() : tru();
    const Formula unit = op == Op::And ? tru() : fls();

    std::vector<uint32_t> operands;
    auto collect = [&](Formula f, auto&& self) -> void {
        if (this->op(f) == op) {
            self(lhs(f), self);
            self(rhs(f), self);
        } else {
            operands.push_back(f.id);
        }
    };
    collect(a, collect);
    collect(b, collect);

    std::sort(operands.begin(), operands.end());
    operands.erase(std::unique(operands.begin(), operands.end()),
                   operands.end());

    std::vector<uint32_t> kept;
    for (uint32_t id : operands) {
        if (id == absorb.id) return absorb;
        if (id != unit.id) kept.push_back(id);
    }
    // x together with !x collapses to the absorbing constant.
    for (uint32_t id : kept) {
        if (nodes_[id].op != Op::Not) continue;
        if (std::binary_search(kept.begin(), kept.end(), nodes_[id].lhs))
            return absorb;
    }

    if (kept.empty()) return unit;
    Formula result{kept.back()};
    for (size_t i = kept.size() - 1; i-- > 0;)
        result = intern(op, kept[i], result.id);
    return result;
}

Formula FormulaFactory::mk_and(Formula a, Formula b) {
    return mk_junction(Op::And, a, b);
}

Formula FormulaFactory::mk_or(Formula a, Formula b) {
    return mk_junction(Op::Or, a, b);
}

Formula FormulaFactory::mk_implies(Formula a, Formula b) {
    if (a == tru()) return b;
    if (a == fls()) return tru();
    if (b == tru()) return tru();
    if (a == b) return tru();
    return intern(Op::Implies, a.id, b.id);
}

Formula FormulaFactory::mk_iff(Formula a, Formula b) {
    if (a == b) return tru();
    if (a == tru()) return b;
    if (b == tru()) return a;
    if (a == fls()) return mk_not(b);
    if (b == fls()) return mk_not(a);
    if (a.id > b.id) std::swap(a, b);
    return intern(Op::Iff, a.id, b.id);
}

Formula FormulaFactory::mk_next(Formula f) {
    if (f == fls()) return fls();  // X false can never hold
    return intern(Op::Next, f.id, 0);
}

Formula FormulaFactory::mk_weak_next(Formula f) {
    if (f == tru()) return tru();  // WX true holds everywhere
    return intern(Op::WeakNext, f.id, 0);
}

Formula FormulaFactory::mk_until(Formula a, Formula b) {
    if (b == tru()) return tru();
    if (b == fls()) return fls();
    if (a == fls()) return b;
    if (a == b) return a;
    return intern(Op::Until, a.id, b.id);
}

Formula FormulaFactory::mk_release(Formula a, Formula b) {
    if (b == tru()) return tru();
    if (b == fls()) return fls();
    if (a == b) return a;
    return intern(Op::Release, a.id, b.id);
}

Formula FormulaFactory::mk_eventually(Formula f) {
    if (f == tru() || f == fls()) return f;
    return intern(Op::Eventually, f.id, 0);
}

Formula FormulaFactory::mk_globally(Formula f) {
    if (f == tru() || f == fls()) return f;
    return intern(Op::Globally, f.id, 0);
}

Formula FormulaFactory::desugar(Formula f) {
    auto it = desugar_memo_.find(f.id);
    if (it != desugar_memo_.end()) return {it->second};
    Formula result;
    switch (op(f)) {
        case Op::True:
        case Op::False:
        case Op::Atom:
            result = f;
            break;
        case Op::Not:
            result = mk_not(desugar(lhs(f)));
            break;
        case Op::And:
            result = mk_and(desugar(lhs(f)), desugar(rhs(f)));
            break;
        case Op::Or:
            result = mk_or(desugar(lhs(f)), desugar(rhs(f)));
            break;
        case Op::Implies:
            result = mk_or(mk_not(desugar(lhs(f))), desugar(rhs(f)));
            break;
        case Op::Iff: {
            Formula a = desugar(lhs(f));
            Formula b = desugar(rhs(f));
            result = mk_or(mk_and(a, b), mk_and(mk_not(a), mk_not(b)));
            break;
        }
        case Op::Next:
            result = mk_next(desugar(lhs(f)));
            break;
        case Op::WeakNext:
            result = mk_weak_next(desugar(lhs(f)));
            break;
        case Op::Until:
            result = mk_until(desugar(lhs(f)), desugar(rhs(f)));
            break;
        case Op::Release:
            // a R b == !(!a U !b)
            result = mk_not(mk_until(mk_not(desugar(lhs(f))),
                                     mk_not(desugar(rhs(f)))));
            break;
        case Op::Eventually:
            result = mk_until(tru(), desugar(lhs(f)));
            break;
        case Op::Globally:
            result = mk_not(mk_until(tru(), mk_not(desugar(lhs(f)))));
            break;
    }
    desugar_memo_.emplace(f.id, result.id);
    return result;
}

// Precedence levels for printing and parsing. Higher binds tighter.
namespace {
constexpr int kPrecIff = 0;
constexpr int kPrecImplies = 1;
constexpr int kPrecOr = 2;
constexpr int kPrecAnd = 3;
constexpr int kPrecUntil = 4;
constexpr int kPrecUnary = 5;
constexpr int kPrecAtom = 6;

int op_prec(Op op) {
    switch (op) {
        case Op::Iff: return kPrecIff;
        case Op::Implies: return kPrecImplies;
        case Op::Or: return kPrecOr;
        case Op::And: return kPrecAnd;
        case Op::Until:
        case Op::Release: return kPrecUntil;
        case Op::Not:
        case Op::Next:
        case Op::WeakNext:
        case Op::Eventually:
        case Op::Globally: return kPrecUnary;
        default: return kPrecAtom;
    }
}
}  // namespace

void FormulaFactory::print(Formula f, int context_prec, std::string& out) const {
    int prec = op_prec(op(f));
    bool need = prec < context_prec;
    if (need) out += '(';
    switch (op(f)) {
        case Op::True: out += "true"; break;
        case Op::False: out += "false"; break;
        case Op::Atom: out += atom_name(f); break;
        case Op::Not:
            out += '!';
            print(lhs(f), kPrecUnary, out);
            break;
        case Op::Next:
            out += "X ";
            print(lhs(f), kPrecUnary, out);
            break;
        case Op::WeakNext:
            out += "WX ";
            print(lhs(f), kPrecUnary, out);
            break;
        case Op::Eventually:
            out += "F ";
            print(lhs(f), kPrecUnary, out);
            break;
        case Op::Globally:
            out += "G ";
            print(lhs(f), kPrecUnary, out);
            break;
        case Op::Until:
        case Op::Release:
            // right-associative
            print(lhs(f), prec + 1, out);
            out += op(f) == Op::Until ? " U " : " R ";
            print(rhs(f), prec, out);
            break;
        case Op::And:
        case Op::Or:
            // canonical chains are right-leaning; print them flat
            print(lhs(f), prec + 1, out);
            out += op(f) == Op::And ? " & " : " | ";
            print(rhs(f), prec, out);
            break;
        case Op::Implies:
        case Op::Iff:
            // right-associative
            print(lhs(f), prec + 1, out);
            out += op(f) == Op::Implies ? " -> " : " <-> ";
            print(rhs(f), prec, out);
            break;
    }
    if (need) out += ')';
}

std::string FormulaFactory::to_string(Formula f) const {
    std::string out;
    print(f, 0, out);
    return out;
}

void FormulaFactory::collect_atoms(Formula f, std::set<std::string>& out) const {
    switch (op(f)) {
        case Op::True:
        case Op::False:
            return;
        case Op::Atom:
            out.insert(atom_name(f));
            return;
        case Op::Not:
        case Op::Next:
        case Op::WeakNext:
        case Op::Eventually:
        case Op::Globally:
            collect_atoms(lhs(f), out);
            return;
        default:
            collect_atoms(lhs(f), out);
            collect_atoms(rhs(f), out);
            return;
    }
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

enum class Tok {
    True, False, Ident, Not, And, Or, Implies, Iff,
    Next, WeakNext, Eventually, Globally, Until, Release,
    LParen, RParen, End,
};

struct Token {
    Tok kind;
    std::string text;
    int line;
    int col;
};

class Lexer {
public:
    Lexer(std::string_view text, int line_offset)
        : text_(text), line_(line_offset), col_(1) {}

    Token next() {
        skip_ws();
        int line = line_, col = col_;
        if (pos_ >= text_.size()) return {Tok::End, "", line, col};
        char c = text_[pos_];
        if (c == '(') return advance(1), Token{Tok::LParen, "(", line, col};
        if (c == ')') return advance(1), Token{Tok::RParen, ")", line, col};
        if (c == '!') return advance(1), Token{Tok::Not, "!", line, col};
        if (c == '&') return advance(1), Token{Tok::And, "&", line, col};
        if (c == '|') return advance(1), Token{Tok::Or, "|", line, col};
        if (c == '-') {
            if (pos_ + 1 < text_.size() && text_[pos_ + 1] == '>')
                return advance(2), Token{Tok::Implies, "->", line, col};
            throw ParseError("unexpected '-'", line, col);
        }
        if (c == '<') {
            if (pos_ + 2 < text_.size() && text_[pos_ + 1] == '-' &&
                text_[pos_ + 2] == '>')
                return advance(3), Token{Tok::Iff, "<->", line, col};
            throw ParseError("unexpected '<'", line, col);
        }
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            size_t start = pos_;
            while (pos_ < text_.size() &&
                   (std::isalnum(static_cast<unsigned char>(text_[pos_])) ||
                    text_[pos_] == '_'))
                advance(1);
            std::string word(text_.substr(start, pos_ - start));
            if (word == "true") return {Tok::True, word, line, col};
            if (word == "false") return {Tok::False, word, line, col};
            if (word == "X") return {Tok::Next, word, line, col};
            if (word == "WX") return {Tok::WeakNext, word, line, col};
            if (word == "F") return {Tok::Eventually, word, line, col};
            if (word == "G") return {Tok::Globally, word, line, col};
            if (word == "U") return {Tok::Until, word, line, col};
            if (word == "R") return {Tok::Release, word, line, col};
            return {Tok::Ident, word, line, col};
        }
        throw ParseError(std::string("unexpected character '") + c + "'", line, col);
    }

private:
    void advance(size_t k) {
        for (size_t i = 0; i < k; ++i) {
            if (text_[pos_] == '\n') { ++line_; col_ = 1; }
            else ++col_;
            ++pos_;
        }
    }

    void skip_ws() {
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (c == '#') {
                while (pos_ < text_.size() && text_[pos_] != '\n') advance(1);
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                advance(1);
            } else {
                break;
            }
        }
    }

    std::string_view text_;
    size_t pos_ = 0;
    int line_;
    int col_;
};

class Parser {
public:
    Parser(FormulaFactory& factory, std::string_view text,
           const std::set<std::string>& alphabet, int line_offset)
        : factory_(factory), alphabet_(alphabet), lexer_(text, line_offset) {
        cur_ = lexer_.next();
    }

    Formula parse() {
        Formula f = parse_iff();
        expect_end();
        return f;
    }

private:
    void bump() { cur_ = lexer_.next(); }

    void expect_end() {
        if (cur_.kind != Tok::End)
            throw ParseError("unexpected token '" + cur_.text + "'", cur_.line,
                             cur_.col);
    }

    Formula parse_iff() {
        Formula a = parse_implies();
        if (cur_.kind == Tok::Iff) {
            bump();
            return factory_.mk_iff(a, parse_iff());
        }
        return a;
    }

    Formula parse_implies() {
        Formula a = parse_or();
        if (cur_.kind == Tok::Implies) {
            bump();
            return factory_.mk_implies(a, parse_implies());
        }
        return a;
    }

    Formula parse_or() {
        Formula a = parse_and();
        while (cur_.kind == Tok::Or) {
            bump();
            a = factory_.mk_or(a, parse_and());
        }
        return a;
    }

    Formula parse_and() {
        Formula a = parse_until();
        while (cur_.kind == Tok::And) {
            bump();
            a = factory_.mk_and(a, parse_until());
        }
        return a;
    }

    Formula parse_until() {
        Formula a = parse_unary();
        if (cur_.kind == Tok::Until) {
            bump();
            return factory_.mk_until(a, parse_until());
        }
        if (cur_.kind == Tok::Release) {
            bump();
            return factory_.mk_release(a, parse_until());
        }
        return a;
    }

    Formula parse_unary() {
        switch (cur_.kind) {
            case Tok::Not: bump(); return factory_.mk_not(parse_unary());
            case Tok::Next: bump(); return factory_.mk_next(parse_unary());
            case Tok::WeakNext: bump(); return factory_.mk_weak_next(parse_unary());
            case Tok::Eventually: bump(); return factory_.mk_eventually(parse_unary());
            case Tok::Globally: bump(); return factory_.mk_globally(parse_unary());
            default: return parse_primary();
        }
    }

    Formula parse_primary() {
        switch (cur_.kind) {
            case Tok::True: bump(); return factory_.tru();
            case Tok::False: bump(); return factory_.fls();
            case Tok::Ident: {
                if (!alphabet_.count(cur_.text))
                    throw ParseError("undeclared atom '" + cur_.text + "'",
                                     cur_.line, cur_.col);
                Formula f = factory_.atom(cur_.text);
                bump();
                return f;
            }
            case Tok::LParen: {
                bump();
                Formula f = parse_iff();
                if (cur_.kind != Tok::RParen)
                    throw ParseError("expected ')'", cur_.line, cur_.col);
                bump();
                return f;
            }
            case Tok::End:
                throw ParseError("unexpected end of formula", cur_.line, cur_.col);
            default:
                throw ParseError("unexpected token '" + cur_.text + "'",
                                 cur_.line, cur_.col);
        }
    }

    FormulaFactory& factory_;
    const std::set<std::string>& alphabet_;
    Lexer lexer_;
    Token cur_;
};

bool valid_atom_name(const std::string& s) {
    if (s.empty()) return false;
    if (!std::isalpha(static_cast<unsigned char>(s[0])) && s[0] != '_') return false;
    for (char c : s)
        if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_') return false;
    static const std::set<std::string> reserved = {"true", "false", "X",  "WX",
                                                   "F",    "G",     "U", "R"};
    return !reserved.count(s);
}

}  // namespace

Formula parse_formula(FormulaFactory& factory, std::string_view text,
                      const std::set<std::string>& alphabet) {
    if (text.empty()) throw ParseError("empty formula");
    return Parser(factory, text, alphabet, 1).parse();
}

Alphabet Spec::alphabet() const {
    Alphabet a;
    a.atoms = inputs;
    a.atoms.insert(a.atoms.end(), outputs.begin(), outputs.end());
    return a;
}

Valuation Spec::input_mask() const {
    return static_cast<Valuation>((1ull << inputs.size()) - 1);
}

Valuation Spec::output_mask() const {
    Valuation all = static_cast<Valuation>(
        (1ull << (inputs.size() + outputs.size())) - 1);
    return all & ~input_mask();
}

std::optional<uint32_t> Spec::goal_index(std::string_view label) const {
    for (uint32_t i = 0; i < goals.size(); ++i)
        if (goals[i].label == label) return i;
    return std::nullopt;
}

Spec parse_spec(std::string_view text) {
    Spec spec;
    spec.factory = std::make_shared<FormulaFactory>();

    std::set<std::string> seen_atoms;
    std::set<std::string> seen_labels;
    bool have_inputs = false, have_outputs = false;

    size_t pos = 0;
    int line_no = 0;
    while (pos <= text.size()) {
        size_t eol = text.find('\n', pos);
        std::string_view raw = text.substr(
            pos, eol == std::string_view::npos ? text.size() - pos : eol - pos);
        ++line_no;

        std::string line(raw);
        if (size_t h = line.find('#'); h != std::string::npos) line.resize(h);
        // trim
        size_t b = line.find_first_not_of(" \t\r");
        size_t e = line.find_last_not_of(" \t\r");
        line = b == std::string::npos ? "" : line.substr(b, e - b + 1);

        if (!line.empty()) {
            auto parse_atom_list = [&](const std::string& rest,
                                       std::vector<std::string>& out) {
                size_t i = 0;
                while (i < rest.size()) {
                    while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
                    size_t start = i;
                    while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
                    if (i == start) break;
                    std::string name = rest.substr(start, i - start);
                    if (!valid_atom_name(name))
                        throw ParseError("invalid atom name '" + name + "'", line_no, 1);
                    if (seen_atoms.count(name))
                        throw ParseError("atom '" + name +
                                             "' declared twice across INPUTS/OUTPUTS",
                                         line_no, 1);
                    seen_atoms.insert(name);
                    out.push_back(name);
                }
            };

            if (line.rfind("INPUTS:", 0) == 0) {
                if (have_inputs)
                    throw ParseError("duplicate INPUTS section", line_no, 1);
                have_inputs = true;
                parse_atom_list(line.substr(7), spec.inputs);
            } else if (line.rfind("OUTPUTS:", 0) == 0) {
                if (have_outputs)
                    throw ParseError("duplicate OUTPUTS section", line_no, 1);
                have_outputs = true;
                parse_atom_list(line.substr(8), spec.outputs);
            } else if (line.rfind("GOAL", 0) == 0) {
                if (!have_inputs || !have_outputs)
                    throw ParseError("GOAL before INPUTS/OUTPUTS", line_no, 1);
                size_t colon = line.find(':');
                if (colon == std::string::npos)
                    throw ParseError("expected ':' after goal label", line_no, 1);
                std::string label = line.substr(4, colon - 4);
                size_t lb = label.find_first_not_of(" \t");
                size_t le = label.find_last_not_of(" \t");
                label = lb == std::string::npos ? "" : label.substr(lb, le - lb + 1);
                if (!valid_atom_name(label))
                    throw ParseError("invalid goal label '" + label + "'", line_no, 1);
                if (seen_labels.count(label))
                    throw ParseError("duplicate goal label '" + label + "'", line_no, 1);
                seen_labels.insert(label);
                std::string body = line.substr(colon + 1);
                if (body.find_first_not_of(" \t") == std::string::npos)
                    throw ParseError("empty goal formula", line_no, 1);
                Formula f = Parser(*spec.factory, body, seen_atoms, line_no).parse();
                spec.goals.push_back({label, f});
            } else {
                throw ParseError("unrecognized line '" + line + "'", line_no, 1);
            }
        }

        if (eol == std::string_view::npos) break;
        pos = eol + 1;
    }

    if (!have_inputs || !have_outputs)
        throw ParseError("spec must declare INPUTS and OUTPUTS");
    if (spec.goals.empty()) throw ParseError("spec must declare at least one goal");
    return spec;
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

bool eval_at(const FormulaFactory& fac, const Trace& trace,
             const std::vector<int>& atom_bit, Formula f, size_t pos) {
    switch (fac.op(f)) {
        case Op::True: return true;
        case Op::False: return false;
        case Op::Atom: {
            int bit = atom_bit[fac.lhs(f).id];
            return bit >= 0 && (trace[pos] >> bit) & 1u;
        }
        case Op::Not: return !eval_at(fac, trace, atom_bit, fac.lhs(f), pos);
        case Op::And:
            return eval_at(fac, trace, atom_bit, fac.lhs(f), pos) &&
                   eval_at(fac, trace, atom_bit, fac.rhs(f), pos);
        case Op::Or:
            return eval_at(fac, trace, atom_bit, fac.lhs(f), pos) ||
                   eval_at(fac, trace, atom_bit, fac.rhs(f), pos);
        case Op::Implies:
            return !eval_at(fac, trace, atom_bit, fac.lhs(f), pos) ||
                   eval_at(fac, trace, atom_bit, fac.rhs(f), pos);
        case Op::Iff:
            return eval_at(fac, trace, atom_bit, fac.lhs(f), pos) ==
                   eval_at(fac, trace, atom_bit, fac.rhs(f), pos);
        case Op::Next:
            return pos + 1 < trace.size() &&
                   eval_at(fac, trace, atom_bit, fac.lhs(f), pos + 1);
        case Op::WeakNext:
            return pos + 1 >= trace.size() ||
                   eval_at(fac, trace, atom_bit, fac.lhs(f), pos + 1);
        case Op::Until:
            for (size_t j = pos; j < trace.size(); ++j) {
                if (eval_at(fac, trace, atom_bit, fac.rhs(f), j)) return true;
                if (!eval_at(fac, trace, atom_bit, fac.lhs(f), j)) return false;
            }
            return false;
        case Op::Release:
            // b must hold up to and including the first position where a holds
            for (size_t j = pos; j < trace.size(); ++j) {
                if (!eval_at(fac, trace, atom_bit, fac.rhs(f), j)) return false;
                if (eval_at(fac, trace, atom_bit, fac.lhs(f), j)) return true;
            }
            return true;
        case Op::Eventually:
            for (size_t j = pos; j < trace.size(); ++j)
                if (eval_at(fac, trace, atom_bit, fac.lhs(f), j)) return true;
            return false;
        case Op::Globally:
            for (size_t j = pos; j < trace.size(); ++j)
                if (!eval_at(fac, trace, atom_bit, fac.lhs(f), j)) return false;
            return true;
    }
    return false;
}

}  // namespace

bool evaluate(const FormulaFactory& factory, const Alphabet& alphabet,
              const Trace& trace, Formula f, size_t pos) {
    if (trace.empty())
        throw std::out_of_range("satisfaction is undefined on the empty trace");
    if (pos >= trace.size())
        throw std::out_of_range("trace position out of range");
    // Map the formula's atoms onto alphabet bits once per call.
    std::set<std::string> atoms;
    factory.collect_atoms(f, atoms);
    std::vector<int> atom_bit;
    auto resolve = [&](Formula g, auto&& self) -> void {
        switch (factory.op(g)) {
            case Op::Atom: {
                uint32_t aid = factory.lhs(g).id;
                if (aid >= atom_bit.size()) atom_bit.resize(aid + 1, -1);
                auto idx = alphabet.index_of(factory.atom_name(g));
                if (!idx)
                    throw std::invalid_argument("atom '" + factory.atom_name(g) +
                                                "' not in alphabet");
                atom_bit[aid] = static_cast<int>(*idx);
                return;
            }
            case Op::True:
            case Op::False:
                return;
            case Op::Not:
            case Op::Next:
            case Op::WeakNext:
            case Op::Eventually:
            case Op::Globally:
                self(factory.lhs(g), self);
                return;
            default:
                self(factory.lhs(g), self);
                self(factory.rhs(g), self);
                return;
        }
    };
    resolve(f, resolve);
    return eval_at(factory, trace, atom_bit, f, pos);
}

} // namespace mpsynth
