#include "sifa/netlist.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <map>
#include <set>
#include <sstream>
#include <unordered_map>

namespace sifa {

std::string_view to_string(GateOp op)
{
    switch (op) {
    case GateOp::Not:
        return "not";
    case GateOp::And:
        return "and";
    case GateOp::Or:
        return "or";
    case GateOp::Xor:
        return "xor";
    }
    return "?";
}

ParseError::ParseError(ParseErrorKind kind, std::size_t line, const std::string& message)
    : std::runtime_error(line ? "line " + std::to_string(line) + ": " + message : message), kind_(kind), line_(line)
{
}

const Input* CircuitNetlist::find_input(std::string_view id) const
{
    auto it = std::find_if(inputs.begin(), inputs.end(), [&](const Input& in) { return in.id == id; });
    return it == inputs.end() ? nullptr : &*it;
}

const Gate* CircuitNetlist::find_gate(std::string_view id) const
{
    auto it = std::find_if(gates.begin(), gates.end(), [&](const Gate& g) { return g.id == id; });
    return it == gates.end() ? nullptr : &*it;
}

std::vector<VarId> CircuitNetlist::input_ids() const
{
    std::vector<VarId> ids;
    ids.reserve(inputs.size());
    for (const auto& in : inputs)
        ids.push_back(in.id);
    return ids;
}

std::vector<VarId> CircuitNetlist::mask_ids() const
{
    std::vector<VarId> ids;
    for (const auto& in : inputs)
        if (in.role.is_mask())
            ids.push_back(in.id);
    return ids;
}

namespace {

bool is_reserved(std::string_view id)
{
    return id == "const0" || id == "const1";
}

bool is_identifier(std::string_view s)
{
    if (s.empty())
        return false;
    auto head = static_cast<unsigned char>(s.front());
    if (!(std::isalpha(head) || head == '_'))
        return false;
    return std::all_of(s.begin() + 1, s.end(), [](char ch) {
        auto c = static_cast<unsigned char>(ch);
        return std::isalnum(c) || c == '_' || c == '.' || c == '[' || c == ']' || c == '$';
    });
}

std::vector<std::string_view> tokenize(std::string_view line)
{
    std::vector<std::string_view> tokens;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i])))
            ++i;
        if (i > start)
            tokens.push_back(line.substr(start, i - start));
    }
    return tokens;
}

struct Line {
    std::size_t number;
    std::vector<std::string_view> tokens;
};

class Parser {
public:
    explicit Parser(std::string_view text) { split(text); }

    CircuitNetlist run()
    {
        collect_declarations();
        for (const auto& line : lines_)
            parse_line(line);
        finish();
        return std::move(circuit_);
    }

private:
    [[noreturn]] static void fail(ParseErrorKind kind, std::size_t line, const std::string& msg)
    {
        throw ParseError(kind, line, msg);
    }

    void split(std::string_view text)
    {
        std::size_t number = 0;
        while (!text.empty()) {
            ++number;
            auto eol = text.find('\n');
            std::string_view raw = text.substr(0, eol);
            text = eol == std::string_view::npos ? std::string_view{} : text.substr(eol + 1);
            if (auto hash = raw.find('#'); hash != std::string_view::npos)
                raw = raw.substr(0, hash);
            auto tokens = tokenize(raw);
            if (!tokens.empty())
                lines_.push_back({number, std::move(tokens)});
        }
    }

    // First pass: remember where every wire is declared so that a use before
    // its declaration can be told apart from a name that never exists.
    void collect_declarations()
    {
        for (const auto& line : lines_) {
            const auto& t = line.tokens;
            if ((t[0] == "input" || t[0] == "gate") && t.size() >= 2)
                declared_at_.try_emplace(std::string(t[1]), line.number);
        }
    }

    void check_new_id(std::string_view id, std::size_t line)
    {
        if (!is_identifier(id))
            fail(ParseErrorKind::Syntax, line, "invalid identifier '" + std::string(id) + "'");
        if (is_reserved(id))
            fail(ParseErrorKind::ReservedName, line, "'" + std::string(id) + "' is a reserved wire name");
        if (defined_.contains(std::string(id)))
            fail(ParseErrorKind::DuplicateId, line, "duplicate id '" + std::string(id) + "'");
    }

    void check_reference(std::string_view wire, std::size_t line)
    {
        if (is_reserved(wire) || defined_.contains(std::string(wire)))
            return;
        auto it = declared_at_.find(std::string(wire));
        if (it != declared_at_.end() && it->second >= line)
            fail(ParseErrorKind::ForwardReference, line,
                 "'" + std::string(wire) + "' is used before its declaration on line " + std::to_string(it->second));
        fail(ParseErrorKind::UndefinedWire, line, "undefined wire '" + std::string(wire) + "'");
    }

    void parse_line(const Line& line)
    {
        const auto& t = line.tokens;
        const auto n = line.number;
        if (t[0] == "circuit") {
            if (t.size() != 2 || !is_identifier(t[1]))
                fail(ParseErrorKind::Syntax, n, "expected 'circuit <name>'");
            if (have_name_)
                fail(ParseErrorKind::DuplicateId, n, "circuit name given twice");
            circuit_.name = std::string(t[1]);
            have_name_ = true;
        } else if (t[0] == "input") {
            parse_input(line);
        } else if (t[0] == "gate") {
            parse_gate(line);
        } else if (t[0] == "output") {
            if (t.size() != 2)
                fail(ParseErrorKind::Syntax, n, "expected 'output <wire>'");
            pending_outputs_.push_back({std::string(t[1]), n});
        } else {
            fail(ParseErrorKind::Syntax, n, "unknown directive '" + std::string(t[0]) + "'");
        }
    }

    void parse_input(const Line& line)
    {
        const auto& t = line.tokens;
        const auto n = line.number;
        if (t.size() < 3)
            fail(ParseErrorKind::Syntax, n, "expected 'input <id> mask' or 'input <id> share <secret> <index>'");
        check_new_id(t[1], n);
        Input in{std::string(t[1]), InputRole::mask()};
        if (t[2] == "mask") {
            if (t.size() != 3)
                fail(ParseErrorKind::Syntax, n, "unexpected tokens after 'mask'");
        } else if (t[2] == "share") {
            if (t.size() != 5)
                fail(ParseErrorKind::Syntax, n, "expected 'input <id> share <secret> <index>'");
            if (!is_identifier(t[3]))
                fail(ParseErrorKind::Syntax, n, "invalid secret name '" + std::string(t[3]) + "'");
            unsigned index = 0;
            auto [ptr, ec] = std::from_chars(t[4].data(), t[4].data() + t[4].size(), index);
            if (ec != std::errc{} || ptr != t[4].data() + t[4].size())
                fail(ParseErrorKind::Syntax, n, "share index must be a non-negative integer");
            in.role = InputRole::share(std::string(t[3]), index);
            share_lines_[std::string(t[3])].emplace_back(index, n);
        } else {
            fail(ParseErrorKind::Syntax, n, "input role must be 'mask' or 'share'");
        }
        defined_.insert(in.id);
        circuit_.inputs.push_back(std::move(in));
    }

    void parse_gate(const Line& line)
    {
        const auto& t = line.tokens;
        const auto n = line.number;
        if (t.size() < 4 || t[2] != "=")
            fail(ParseErrorKind::Syntax, n, "expected 'gate <id> = <op> <operand> [<operand>]'");
        check_new_id(t[1], n);
        Gate g;
        g.id = std::string(t[1]);
        std::size_t arity = 2;
        if (t[3] == "not") {
            g.op = GateOp::Not;
            arity = 1;
        } else if (t[3] == "and") {
            g.op = GateOp::And;
        } else if (t[3] == "or") {
            g.op = GateOp::Or;
        } else if (t[3] == "xor") {
            g.op = GateOp::Xor;
        } else {
            fail(ParseErrorKind::Syntax, n, "unknown gate operator '" + std::string(t[3]) + "'");
        }
        if (t.size() - 4 != arity)
            fail(ParseErrorKind::Arity, n,
                 std::string(to_string(g.op)) + " takes exactly " + std::to_string(arity) + " operand" +
                     (arity == 1 ? "" : "s") + ", got " + std::to_string(t.size() - 4));
        for (std::size_t i = 4; i < t.size(); ++i) {
            Operand op;
            std::string_view w = t[i];
            if (w.starts_with('!')) {
                op.negated = true;
                w.remove_prefix(1);
            }
            if (!is_identifier(w))
                fail(ParseErrorKind::Syntax, n, "invalid operand '" + std::string(t[i]) + "'");
            check_reference(w, n);
            op.wire = std::string(w);
            g.operands.push_back(std::move(op));
        }
        defined_.insert(g.id);
        circuit_.gates.push_back(std::move(g));
    }

    void finish()
    {
        std::set<std::string> seen_outputs;
        for (const auto& [wire, n] : pending_outputs_) {
            if (!is_identifier(wire))
                fail(ParseErrorKind::Syntax, n, "invalid output '" + wire + "'");
            if (!is_reserved(wire) && !defined_.contains(wire))
                fail(ParseErrorKind::UndefinedWire, n, "output refers to undefined wire '" + wire + "'");
            if (!seen_outputs.insert(wire).second)
                fail(ParseErrorKind::DuplicateId, n, "wire '" + wire + "' is declared as output twice");
            circuit_.outputs.push_back(wire);
        }
        if (circuit_.outputs.empty())
            fail(ParseErrorKind::NoOutputs, 0, "circuit declares no outputs");
        for (auto& [secret, shares] : share_lines_) {
            std::sort(shares.begin(), shares.end());
            for (std::size_t i = 1; i < shares.size(); ++i)
                if (shares[i].first == shares[i - 1].first)
                    fail(ParseErrorKind::ShareIndices, shares[i].second,
                         "secret '" + secret + "' has two shares with index " + std::to_string(shares[i].first));
            if (shares.size() < 2)
                fail(ParseErrorKind::SingleShare, shares.front().second,
                     "secret '" + secret + "' has a single share; at least two are required");
            for (std::size_t i = 0; i < shares.size(); ++i)
                if (shares[i].first != i)
                    fail(ParseErrorKind::ShareIndices, shares[i].second,
                         "share indices of secret '" + secret + "' must be contiguous from 0");
        }
        if (!have_name_)
            circuit_.name = "circuit";
    }

    std::vector<Line> lines_;
    std::unordered_map<std::string, std::size_t> declared_at_;
    std::set<std::string> defined_;
    std::map<std::string, std::vector<std::pair<unsigned, std::size_t>>> share_lines_;
    std::vector<std::pair<std::string, std::size_t>> pending_outputs_;
    CircuitNetlist circuit_;
    bool have_name_ = false;
};

}  // namespace

CircuitNetlist parse_netlist(std::string_view text)
{
    return Parser(text).run();
}

std::string serialize_netlist(const CircuitNetlist& c)
{
    std::ostringstream os;
    os << "circuit " << c.name << "\n\n";
    for (const auto& in : c.inputs) {
        os << "input " << in.id;
        if (in.role.is_mask())
            os << " mask\n";
        else
            os << " share " << *in.role.secret << ' ' << in.role.share_index << '\n';
    }
    os << '\n';
    for (const auto& g : c.gates) {
        os << "gate " << g.id << " = " << to_string(g.op);
        for (const auto& op : g.operands)
            os << ' ' << (op.negated ? "!" : "") << op.wire;
        os << '\n';
    }
    os << '\n';
    for (const auto& out : c.outputs)
        os << "output " << out << '\n';
    return os.str();
}

std::vector<SecretSpec> secrets_of(const CircuitNetlist& c)
{
    std::vector<SecretSpec> secrets;
    std::map<std::string, std::map<unsigned, VarId>> shares;
    for (const auto& in : c.inputs) {
        if (in.role.is_mask())
            continue;
        const auto& name = *in.role.secret;
        if (!shares.contains(name))
            secrets.push_back({name, {}});
        shares[name][in.role.share_index] = in.id;
    }
    for (auto& s : secrets)
        for (auto& [index, id] : shares[s.name])
            s.shares.push_back(id);
    return secrets;
}

}  // namespace sifa
