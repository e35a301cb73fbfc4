#include "camsim/regex.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <sstream>

#include "camsim/errors.hpp"

namespace camsim {

namespace {

class Parser {
public:
    explicit Parser(const std::string& text) : text_(text) {}

    RegexTree run() {
        RegexTree t = parse_alt();
        if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
        return t;
    }

private:
    const std::string& text_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(pos_, what); }

    bool at_end() const { return pos_ >= text_.size(); }
    char peek() const { return text_[pos_]; }
    char take() {
        if (at_end()) fail("unexpected end of pattern");
        return text_[pos_++];
    }

    static RegexTree make(RegexNode::Kind kind) {
        auto n = std::make_unique<RegexNode>();
        n->kind = kind;
        return n;
    }

    static RegexTree class_leaf(SymbolClass cls) {
        auto n = make(RegexNode::Kind::Class);
        n->cls = std::move(cls);
        return n;
    }

    RegexTree parse_alt() {
        auto alt = make(RegexNode::Kind::Alt);
        alt->children.push_back(parse_concat());
        while (!at_end() && peek() == '|') {
            take();
            alt->children.push_back(parse_concat());
        }
        if (alt->children.size() == 1) return std::move(alt->children.front());
        return alt;
    }

    RegexTree parse_concat() {
        auto cat = make(RegexNode::Kind::Concat);
        while (!at_end() && peek() != '|' && peek() != ')')
            cat->children.push_back(parse_repeat());
        if (cat->children.empty()) fail("empty alternative");
        if (cat->children.size() == 1) return std::move(cat->children.front());
        return cat;
    }

    RegexTree parse_repeat() {
        RegexTree atom = parse_atom();
        while (!at_end() && (peek() == '*' || peek() == '+' || peek() == '?')) {
            char op = take();
            auto n = make(op == '*'   ? RegexNode::Kind::Star
                          : op == '+' ? RegexNode::Kind::Plus
                                      : RegexNode::Kind::Opt);
            n->children.push_back(std::move(atom));
            atom = std::move(n);
        }
        return atom;
    }

    RegexTree parse_atom() {
        if (at_end()) fail("expected atom");
        char c = peek();
        switch (c) {
            case '(': {
                take();
                RegexTree inner = parse_alt();
                if (at_end() || peek() != ')') fail("expected ')'");
                take();
                return inner;
            }
            case '[': return parse_class();
            case '*':
            case '+':
            case '?': fail("repeat operator with nothing to repeat");
            case ')': fail("unmatched ')'");
            case '|': fail("empty alternative");
            default: {
                SymbolClass cls;
                cls.members.insert(parse_symbol());
                return class_leaf(std::move(cls));
            }
        }
    }

    // One literal symbol, handling backslash escapes including \xHH.
    Symbol parse_symbol() {
        char c = take();
        if (c != '\\') return static_cast<Symbol>(static_cast<unsigned char>(c));
        if (at_end()) fail("dangling escape");
        char e = take();
        switch (e) {
            case 'n': return '\n';
            case 't': return '\t';
            case 'r': return '\r';
            case '0': return 0;
            case 'x': {
                int value = 0;
                for (int k = 0; k < 2; ++k) {
                    char h = take();
                    if (!std::isxdigit(static_cast<unsigned char>(h))) fail("bad hex escape");
                    value = value * 16 + (std::isdigit(static_cast<unsigned char>(h))
                                              ? h - '0'
                                              : std::tolower(h) - 'a' + 10);
                }
                return value;
            }
            default: return static_cast<Symbol>(static_cast<unsigned char>(e));
        }
    }

    RegexTree parse_class() {
        take();  // '['
        SymbolClass cls;
        if (!at_end() && peek() == '^') {
            take();
            cls.negated = true;
        }
        bool any = false;
        while (true) {
            if (at_end()) fail("expected ']'");
            if (peek() == ']') {
                take();
                break;
            }
            Symbol lo = parse_symbol();
            Symbol hi = lo;
            if (!at_end() && peek() == '-' && pos_ + 1 < text_.size() &&
                text_[pos_ + 1] != ']') {
                take();  // '-'
                hi = parse_symbol();
                if (hi < lo) fail("inverted range");
            }
            for (Symbol s = lo; s <= hi; ++s) cls.members.insert(s);
            any = true;
        }
        if (!any) fail("empty character class");
        return class_leaf(std::move(cls));
    }
};

// -- Glushkov position automaton -------------------------------------------

struct Analysis {
    bool nullable = false;
    std::vector<int> first;
    std::vector<int> last;
};

class Glushkov {
public:
    explicit Glushkov(int alphabet_size) : alphabet_(alphabet_size) {}

    HomogeneousNfa run(const RegexNode& root) {
        Analysis a = walk(root);
        if (classes_.empty())
            throw Error::input("pattern matches only the empty string");
        HomogeneousNfa nfa;
        nfa.alphabet_size = alphabet_;
        nfa.edges.resize(classes_.size());
        for (std::size_t i = 0; i < classes_.size(); ++i) {
            Ste st;
            st.id = static_cast<int>(i);
            st.cls = classes_[i];
            nfa.states.push_back(std::move(st));
        }
        for (int p : a.first)
            nfa.states[static_cast<std::size_t>(p)].start = StartKind::StartOfData;
        for (int p : a.last) nfa.states[static_cast<std::size_t>(p)].reporting = true;
        for (const auto& [src, dst] : follow_)
            nfa.edges[static_cast<std::size_t>(src)].insert(dst);
        nfa.validate();
        return nfa;
    }

private:
    int alphabet_;
    std::vector<SymbolClass> classes_;
    std::vector<std::pair<int, int>> follow_;

    void link(const std::vector<int>& from, const std::vector<int>& to) {
        for (int u : from)
            for (int v : to) follow_.emplace_back(u, v);
    }

    // Alternations whose branches are all bare classes collapse into one
    // position, so (a|b) costs a single state.
    static bool is_class_alt(const RegexNode& n) {
        if (n.kind != RegexNode::Kind::Alt) return false;
        return std::all_of(n.children.begin(), n.children.end(), [](const auto& c) {
            return c->kind == RegexNode::Kind::Class ||
                   (c->kind == RegexNode::Kind::Alt && is_class_alt(*c));
        });
    }

    void collect_class_union(const RegexNode& n, std::set<Symbol>& out) {
        if (n.kind == RegexNode::Kind::Class) {
            for (Symbol s : n.cls.effective(alphabet_)) out.insert(s);
            return;
        }
        for (const auto& c : n.children) collect_class_union(*c, out);
    }

    Analysis walk(const RegexNode& n) {
        switch (n.kind) {
            case RegexNode::Kind::Class: {
                int pos = static_cast<int>(classes_.size());
                classes_.push_back(n.cls);
                return {false, {pos}, {pos}};
            }
            case RegexNode::Kind::Alt: {
                if (is_class_alt(n)) {
                    SymbolClass merged;
                    collect_class_union(n, merged.members);
                    int pos = static_cast<int>(classes_.size());
                    classes_.push_back(std::move(merged));
                    return {false, {pos}, {pos}};
                }
                Analysis out;
                for (const auto& c : n.children) {
                    Analysis a = walk(*c);
                    out.nullable = out.nullable || a.nullable;
                    out.first.insert(out.first.end(), a.first.begin(), a.first.end());
                    out.last.insert(out.last.end(), a.last.begin(), a.last.end());
                }
                return out;
            }
            case RegexNode::Kind::Concat: {
                Analysis out;
                out.nullable = true;
                std::vector<int> live_last;  // lasts that can precede the next child
                for (const auto& c : n.children) {
                    Analysis a = walk(*c);
                    link(live_last, a.first);
                    if (out.nullable)
                        out.first.insert(out.first.end(), a.first.begin(), a.first.end());
                    if (a.nullable) {
                        live_last.insert(live_last.end(), a.last.begin(), a.last.end());
                    } else {
                        live_last = a.last;
                    }
                    out.nullable = out.nullable && a.nullable;
                }
                out.last = live_last;
                return out;
            }
            case RegexNode::Kind::Star: {
                Analysis a = walk(*n.children.front());
                link(a.last, a.first);
                return {true, a.first, a.last};
            }
            case RegexNode::Kind::Plus: {
                Analysis a = walk(*n.children.front());
                link(a.last, a.first);
                return {a.nullable, a.first, a.last};
            }
            case RegexNode::Kind::Opt: {
                Analysis a = walk(*n.children.front());
                return {true, a.first, a.last};
            }
        }
        throw Error::input("corrupt syntax tree");
    }
};

}  // namespace

RegexTree parse_regex(const std::string& pattern) { return Parser(pattern).run(); }

HomogeneousNfa glushkov_construct(const RegexNode& tree, int alphabet_size) {
    return Glushkov(alphabet_size).run(tree);
}

HomogeneousNfa nfa_from_regex(const std::string& pattern, int alphabet_size) {
    RegexTree t = parse_regex(pattern);
    return glushkov_construct(*t, alphabet_size);
}

HomogeneousNfa nfa_from_regex_list(const std::string& text, int alphabet_size) {
    std::vector<HomogeneousNfa> parts;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        while (!line.empty() && (line.back() == '\r' || line.back() == '\n')) line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        parts.push_back(nfa_from_regex(line, alphabet_size));
    }
    if (parts.empty()) throw Error::input("no patterns in regex list");
    HomogeneousNfa nfa = merge_nfas(parts);
    nfa.validate();
    return nfa;
}

}  // namespace camsim
