#include "mimp/formula.hpp"

#include <algorithm>
#include <cctype>
#include <map>

namespace mimp {

namespace {

std::uint64_t mix(std::uint64_t h, std::uint64_t v) {
    h ^= v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
    return h;
}

std::uint64_t string_hash(const std::string& s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

} // namespace

FormulaPtr Formula::atom(std::string name) {
    auto f = std::shared_ptr<Formula>(new Formula());
    f->print_len_ = name.size();
    f->hash_ = mix(0x61, string_hash(name));
    f->name_ = std::move(name);
    return f;
}

FormulaPtr Formula::imp(FormulaPtr antecedent, FormulaPtr consequent) {
    if (!antecedent || !consequent)
        throw std::invalid_argument("imp: null subformula");
    auto f = std::shared_ptr<Formula>(new Formula());
    f->node_count_ = 1 + antecedent->node_count() + consequent->node_count();
    bool paren = antecedent->is_imp();
    f->token_count_ =
        1 + antecedent->token_count() + consequent->token_count() + (paren ? 2 : 0);
    f->print_len_ =
        antecedent->print_length() + (paren ? 2 : 0) + 4 + consequent->print_length();
    f->hash_ = mix(mix(0x69, antecedent->hash()), consequent->hash());
    f->ante_ = std::move(antecedent);
    f->cons_ = std::move(consequent);
    return f;
}

const std::string& Formula::atom_name() const {
    if (!is_atom()) throw std::logic_error("atom_name on implication");
    return name_;
}

const FormulaPtr& Formula::antecedent() const {
    if (is_atom()) throw std::logic_error("antecedent of atom");
    return ante_;
}

const FormulaPtr& Formula::consequent() const {
    if (is_atom()) throw std::logic_error("consequent of atom");
    return cons_;
}

bool formula_equal(const FormulaPtr& a, const FormulaPtr& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->hash() != b->hash() || a->node_count() != b->node_count()) return false;
    if (a->is_atom() != b->is_atom()) return false;
    if (a->is_atom()) return a->atom_name() == b->atom_name();
    return formula_equal(a->antecedent(), b->antecedent()) &&
           formula_equal(a->consequent(), b->consequent());
}

namespace {

void print_rec(const FormulaPtr& f, std::string& out) {
    if (f->is_atom()) {
        out += f->atom_name();
        return;
    }
    const FormulaPtr& a = f->antecedent();
    if (a->is_imp()) {
        out += '(';
        print_rec(a, out);
        out += ')';
    } else {
        print_rec(a, out);
    }
    out += " -> ";
    print_rec(f->consequent(), out);
}

} // namespace

std::string print_formula(const FormulaPtr& f) {
    if (!f) throw std::invalid_argument("print_formula: null");
    std::string out;
    out.reserve(f->print_length());
    print_rec(f, out);
    return out;
}

// ── Parser ──────────────────────────────────────────────────────────────

namespace {

struct Lexer {
    std::string_view text;
    std::size_t pos = 0;

    void skip_ws() {
        while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos])))
            ++pos;
    }
    bool at_end() {
        skip_ws();
        return pos >= text.size();
    }
    char peek() {
        skip_ws();
        return pos < text.size() ? text[pos] : '\0';
    }
};

FormulaPtr parse_imp(Lexer& lx);

FormulaPtr parse_primary(Lexer& lx) {
    lx.skip_ws();
    if (lx.pos >= lx.text.size())
        throw ParseError("unexpected end of input, expected formula", lx.pos);
    char c = lx.text[lx.pos];
    if (c == '(') {
        ++lx.pos;
        FormulaPtr inner = parse_imp(lx);
        lx.skip_ws();
        if (lx.pos >= lx.text.size() || lx.text[lx.pos] != ')')
            throw ParseError("expected ')'", lx.pos);
        ++lx.pos;
        return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) {
        std::size_t start = lx.pos;
        ++lx.pos;
        while (lx.pos < lx.text.size()) {
            char d = lx.text[lx.pos];
            if (std::isalnum(static_cast<unsigned char>(d)) || d == '_')
                ++lx.pos;
            else
                break;
        }
        return Formula::atom(std::string(lx.text.substr(start, lx.pos - start)));
    }
    throw ParseError(std::string("unexpected character '") + c + "'", lx.pos);
}

FormulaPtr parse_imp(Lexer& lx) {
    FormulaPtr left = parse_primary(lx);
    lx.skip_ws();
    if (lx.pos + 1 < lx.text.size() && lx.text[lx.pos] == '-' && lx.text[lx.pos + 1] == '>') {
        lx.pos += 2;
        return Formula::imp(std::move(left), parse_imp(lx));
    }
    if (lx.pos < lx.text.size() && lx.text[lx.pos] == '-')
        throw ParseError("expected '->'", lx.pos);
    return left;
}

} // namespace

FormulaPtr parse_formula(std::string_view text) {
    Lexer lx{text};
    if (lx.at_end()) throw ParseError("empty input", 0);
    FormulaPtr f = parse_imp(lx);
    if (!lx.at_end())
        throw ParseError("trailing input after formula", lx.pos);
    return f;
}

// ── Spine ───────────────────────────────────────────────────────────────

Spine spine_decompose(const FormulaPtr& f) {
    if (!f) throw std::invalid_argument("spine_decompose: null");
    Spine s;
    FormulaPtr cur = f;
    while (cur->is_imp()) {
        s.antecedents.push_back(cur->antecedent());
        cur = cur->consequent();
    }
    s.head = cur;
    return s;
}

FormulaPtr spine_compose(const std::vector<FormulaPtr>& antecedents, FormulaPtr head) {
    if (!head) throw std::invalid_argument("spine_compose: null head");
    FormulaPtr cur = std::move(head);
    for (auto it = antecedents.rbegin(); it != antecedents.rend(); ++it)
        cur = Formula::imp(*it, cur);
    return cur;
}

// ── Subformula orders and dependency bits ──────────────────────────────

namespace {

void collect_subformulas(const FormulaPtr& f, std::map<std::string, FormulaPtr>& seen) {
    std::string key = print_formula(f);
    if (seen.emplace(std::move(key), f).second && f->is_imp()) {
        collect_subformulas(f->antecedent(), seen);
        collect_subformulas(f->consequent(), seen);
    }
}

} // namespace

std::vector<FormulaPtr> distinct_subformulas(const FormulaPtr& f) {
    std::map<std::string, FormulaPtr> seen;
    collect_subformulas(f, seen);
    std::vector<FormulaPtr> out;
    out.reserve(seen.size());
    for (auto& [text, sub] : seen) out.push_back(sub);
    std::stable_sort(out.begin(), out.end(), [](const FormulaPtr& a, const FormulaPtr& b) {
        if (a->node_count() != b->node_count()) return a->node_count() < b->node_count();
        return print_formula(a) < print_formula(b);
    });
    return out;
}

SubformulaOrder::SubformulaOrder(std::vector<FormulaPtr> sequence) : seq_(std::move(sequence)) {
    for (std::size_t i = 0; i < seq_.size(); ++i)
        for (std::size_t j = i + 1; j < seq_.size(); ++j)
            if (formula_equal(seq_[i], seq_[j]))
                throw std::invalid_argument("SubformulaOrder: duplicate element");
}

SubformulaOrder SubformulaOrder::default_for(const FormulaPtr& f) {
    return SubformulaOrder(distinct_subformulas(f));
}

std::size_t SubformulaOrder::index_of(const FormulaPtr& f) const {
    for (std::size_t i = 0; i < seq_.size(); ++i)
        if (formula_equal(seq_[i], f)) return i;
    throw std::out_of_range("SubformulaOrder: formula not in order: " + print_formula(f));
}

bool SubformulaOrder::contains(const FormulaPtr& f) const {
    for (const auto& g : seq_)
        if (formula_equal(g, f)) return true;
    return false;
}

std::string encode_dependencies(const SubformulaOrder& order,
                                const std::vector<FormulaPtr>& deps) {
    std::string bits(order.size(), '0');
    for (const auto& d : deps) {
        if (!order.contains(d))
            throw std::invalid_argument("encode_dependencies: formula outside order: " +
                                        print_formula(d));
        bits[order.index_of(d)] = '1';
    }
    return bits;
}

std::vector<FormulaPtr> decode_dependencies(const SubformulaOrder& order,
                                            const std::string& bits) {
    if (bits.size() != order.size())
        throw std::invalid_argument("decode_dependencies: bitstring length " +
                                    std::to_string(bits.size()) + " does not match order size " +
                                    std::to_string(order.size()));
    std::vector<FormulaPtr> out;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] == '1')
            out.push_back(order.at(i));
        else if (bits[i] != '0')
            throw std::invalid_argument("decode_dependencies: invalid character in bitstring");
    }
    return out;
}

} // namespace mimp
