#pragma once

#include <fstream>
#include <memory>
#include <sstream>
#include <string>

#include "abside/harness/experiment.hpp"
#include "abside/speclang/contract.hpp"

namespace abside::testing {

inline std::string corpus_file(const std::string& family, const std::string& name) {
    return std::string(ABSIDE_DEFAULT_CORPUS) + "/" + family + "/" + name + ".mjml";
}

inline std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline std::shared_ptr<const speclang::SpecEnv> env_of_source(const std::string& source) {
    return std::make_shared<const speclang::SpecEnv>(surface::load_program(source));
}

inline std::shared_ptr<const speclang::SpecEnv> corpus_env(const std::string& family, const std::string& name) {
    return harness::load_env(corpus_file(family, name));
}

// Replaces every occurrence of `from` by `to`.
inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
    for (std::size_t at = s.find(from); at != std::string::npos; at = s.find(from, at + to.size()))
        s.replace(at, from.size(), to);
    return s;
}

}  // namespace abside::testing
