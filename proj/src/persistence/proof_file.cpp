#include "abside/persistence/proof_file.hpp"

#include <cctype>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "abside/prover/rules.hpp"

namespace abside::persistence {

namespace {

std::string quote(const std::string& s) {
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out += '\\';
        out += c;
    }
    return out + "\"";
}

std::string hex(std::size_t h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016zx", h);
    return buf;
}

std::string on_off(bool b) { return b ? "on" : "off"; }

bool parse_on_off(const std::string& v, int line) {
    if (v == "on") return true;
    if (v == "off") return false;
    throw FormatError("line " + std::to_string(line) + ": expected on or off, got " + v);
}

// Splits a step line into tokens; a quoted token keeps its spaces.
std::vector<std::string> tokens(const std::string& line, int lineno) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && line[i] == ' ') ++i;
        if (i >= line.size()) break;
        std::string tok;
        while (i < line.size() && line[i] != ' ') {
            if (line[i] == '"') {
                ++i;
                while (i < line.size() && line[i] != '"') {
                    if (line[i] == '\\' && i + 1 < line.size()) ++i;
                    tok += line[i++];
                }
                if (i >= line.size()) throw FormatError("line " + std::to_string(lineno) + ": unterminated quote");
                ++i;
            } else {
                tok += line[i++];
            }
        }
        out.push_back(std::move(tok));
    }
    return out;
}

std::size_t parse_number(const std::string& s, int line, int base = 10) {
    try {
        std::size_t used = 0;
        unsigned long long v = std::stoull(s, &used, base);
        if (used != s.size()) throw std::invalid_argument(s);
        return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
        throw FormatError("line " + std::to_string(line) + ": bad number " + s);
    }
}

}  // namespace

std::string serialize(const prover::Proof& proof) {
    std::ostringstream os;
    const auto& s = proof.settings;
    os << kFormatVersion << "\n";
    os << "contract " << proof.obligation().id() << "#0\n";
    os << "mode " << prover::to_string(s.mode) << "\n";
    os << "splits " << on_off(s.splits) << "\n";
    os << "qlimit " << s.qlimit << "\n";
    os << "budget " << s.budget << "\n";
    os << "decreases " << on_off(s.check_decreases) << "\n";
    std::size_t id = 0;
    prover::for_each_node(proof.root(), [&](const prover::ProofNode& n) {
        std::size_t me = id++;
        if (!n.app) return;
        const auto& a = *n.app;
        os << me << " " << a.rule << " " << (a.pos ? logic::to_string(*a.pos) : std::string("@G")) << " #"
           << hex(a.focus_hash) << " inst=" << quote(a.inst) << " fresh=";
        for (std::size_t i = 0; i < a.fresh.size(); ++i) os << (i ? "," : "") << a.fresh[i];
        os << " branches=" << a.branches << "\n";
    });
    return os.str();
}

ProofFile parse(const std::string& text) {
    ProofFile f;
    std::istringstream is(text);
    std::string line;
    int lineno = 0;
    bool header = false, contract = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        if (!header) {
            if (line != kFormatVersion) throw FormatError("line " + std::to_string(lineno) + ": expected " + kFormatVersion);
            header = true;
            continue;
        }
        auto t = tokens(line, lineno);
        const std::string& key = t[0];
        if (t.size() == 2 && !std::isdigit(static_cast<unsigned char>(key[0]))) {
            const std::string& v = t[1];
            if (key == "contract") {
                f.contract = v;
                contract = true;
            } else if (key == "mode") {
                try {
                    f.settings.mode = prover::parse_mode(v);
                } catch (const std::invalid_argument& e) {
                    throw FormatError("line " + std::to_string(lineno) + ": " + e.what());
                }
            } else if (key == "splits") {
                f.settings.splits = parse_on_off(v, lineno);
            } else if (key == "qlimit") {
                f.settings.qlimit = static_cast<int>(parse_number(v, lineno));
            } else if (key == "budget") {
                f.settings.budget = static_cast<long>(parse_number(v, lineno));
            } else if (key == "decreases") {
                f.settings.check_decreases = parse_on_off(v, lineno);
            } else {
                throw FormatError("line " + std::to_string(lineno) + ": unknown setting " + key);
            }
            continue;
        }
        if (t.size() != 7) throw FormatError("line " + std::to_string(lineno) + ": malformed step");
        RecordedStep st;
        st.node = parse_number(t[0], lineno);
        st.app.rule = t[1];
        if (t[2] != "@G") {
            try {
                st.app.pos = logic::parse_position(t[2]);
            } catch (const std::exception&) {
                throw FormatError("line " + std::to_string(lineno) + ": bad position " + t[2]);
            }
        }
        if (t[3].size() < 2 || t[3][0] != '#') throw FormatError("line " + std::to_string(lineno) + ": bad focus hash");
        st.app.focus_hash = parse_number(t[3].substr(1), lineno, 16);
        auto field = [&](const std::string& tok, const std::string& name) {
            if (tok.rfind(name + "=", 0) != 0) throw FormatError("line " + std::to_string(lineno) + ": expected " + name + "=");
            return tok.substr(name.size() + 1);
        };
        st.app.inst = field(t[4], "inst");
        std::string fresh = field(t[5], "fresh");
        std::size_t start = 0;
        while (start < fresh.size()) {
            std::size_t comma = fresh.find(',', start);
            if (comma == std::string::npos) comma = fresh.size();
            st.app.fresh.push_back(fresh.substr(start, comma - start));
            start = comma + 1;
        }
        st.app.branches = parse_number(field(t[6], "branches"), lineno);
        if (!f.steps.empty() && st.node <= f.steps.back().node)
            throw FormatError("line " + std::to_string(lineno) + ": steps are not in pre-order");
        f.steps.push_back(std::move(st));
    }
    if (!header) throw FormatError("missing " + std::string(kFormatVersion) + " header");
    if (!contract) throw FormatError("missing contract line");
    return f;
}

std::unique_ptr<prover::Proof> replay(const ProofFile& file, speclang::ProofObligation po) {
    std::string id = po.id() + "#0";
    if (file.contract != id) throw ReplayError("proof is for " + file.contract + ", obligation is " + id);
    auto proof = std::make_unique<prover::Proof>(std::move(po));
    proof->settings = file.settings;
    std::size_t next = 0;
    std::size_t counter = 0;
    std::vector<prover::ProofNode*> stack{&proof->root()};
    while (!stack.empty()) {
        prover::ProofNode* n = stack.back();
        stack.pop_back();
        std::size_t me = counter++;
        if (next >= file.steps.size() || file.steps[next].node != me) continue;
        prover::RuleApp app = file.steps[next].app;
        std::vector<logic::Sequent> premisses;
        try {
            premisses = prover::apply_rule(n->seq, app, *proof, file.settings, true);
        } catch (const prover::RuleError& e) {
            throw ReplayError("step " + std::to_string(next + 1) + " (node " + std::to_string(me) + ", " +
                              file.steps[next].app.rule + "): " + e.what());
        }
        proof->expand(*n, std::move(app), std::move(premisses));
        ++next;
        for (auto it = n->children.rbegin(); it != n->children.rend(); ++it) stack.push_back(it->get());
    }
    if (next != file.steps.size())
        throw ReplayError("step " + std::to_string(next + 1) + " refers to node " +
                          std::to_string(file.steps[next].node) + ", which does not exist");
    return proof;
}

void save_to_file(const prover::Proof& proof, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << serialize(proof);
    if (!out) throw std::runtime_error("cannot write " + path);
}

ProofFile load_from_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw FormatError("cannot read " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

}  // namespace abside::persistence
