#include "abside/logic/sequent.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "abside/logic/syntax.hpp"

namespace abside::logic {

bool operator<(const Position& a, const Position& b) {
    if (a.side != b.side) return a.side == Side::Ante;
    if (a.index != b.index) return a.index < b.index;
    return a.path < b.path;
}

std::string to_string(const Position& p) {
    std::string s = p.side == Side::Ante ? "@A" : "@S";
    s += std::to_string(p.index);
    for (int i : p.path) s += "/" + std::to_string(i);
    return s;
}

Position parse_position(const std::string& text) {
    if (text.size() < 3 || text[0] != '@' || (text[1] != 'A' && text[1] != 'S'))
        throw std::invalid_argument("bad position '" + text + "'");
    Position p;
    p.side = text[1] == 'A' ? Side::Ante : Side::Succ;
    std::size_t i = 2;
    auto number = [&]() {
        std::size_t j = i;
        while (j < text.size() && std::isdigit(static_cast<unsigned char>(text[j]))) ++j;
        if (j == i) throw std::invalid_argument("bad position '" + text + "'");
        long v = std::stol(text.substr(i, j - i));
        i = j;
        return v;
    };
    p.index = static_cast<std::size_t>(number());
    while (i < text.size()) {
        if (text[i] != '/') throw std::invalid_argument("bad position '" + text + "'");
        ++i;
        p.path.push_back(static_cast<int>(number()));
    }
    return p;
}

bool Sequent::contains(Side s, const Term& f) const {
    const auto& v = side(s);
    return std::find(v.begin(), v.end(), f) != v.end();
}

bool Sequent::add(Side s, const Term& f) {
    if (contains(s, f)) return false;
    mut(s).push_back(f);
    return true;
}

void Sequent::replace(Side s, std::size_t i, const Term& f) {
    auto& v = mut(s);
    for (std::size_t k = 0; k < v.size(); ++k) {
        if (k != i && v[k] == f) {
            v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
            return;
        }
    }
    v.at(i) = f;
}

void Sequent::remove(Side s, std::size_t i) {
    auto& v = mut(s);
    v.erase(v.begin() + static_cast<std::ptrdiff_t>(i));
}

bool Sequent::has_modality() const {
    for (const auto& f : ante_)
        if (contains_modality(f)) return true;
    for (const auto& f : succ_)
        if (contains_modality(f)) return true;
    return false;
}

std::string Sequent::to_string() const {
    std::ostringstream os;
    for (std::size_t i = 0; i < ante_.size(); ++i) os << (i ? ",\n" : "") << "  " << logic::to_string(ante_[i]);
    os << (ante_.empty() ? "" : "\n") << "==>\n";
    for (std::size_t i = 0; i < succ_.size(); ++i) os << (i ? ",\n" : "") << "  " << logic::to_string(succ_[i]);
    return os.str();
}

}  // namespace abside::logic
