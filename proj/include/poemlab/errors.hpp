// Copyright (c) 2026 The poemlab developers
// Distributed under the MIT software license, see the accompanying
// file COPYING or http://www.opensource.org/licenses/mit-license.php.

#ifndef POEMLAB_ERRORS_HPP
#define POEMLAB_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace poemlab {

class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/** Bad configuration or parameter out of its documented range. CLI exit code 2. */
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config error: " + what) {}
};

/** Fixed-point accumulator exceeded its representable width. */
class ArithmeticOverflowError : public Error {
public:
    explicit ArithmeticOverflowError(const std::string& what) : Error("arithmetic overflow: " + what) {}
};

/** Block fails a structural or threshold rule and cannot be stored. */
class InvalidBlockError : public Error {
public:
    explicit InvalidBlockError(const std::string& what) : Error("invalid block: " + what) {}
};

/** Lookup of a block id that is not in the store. */
class UnknownBlockError : public Error {
public:
    explicit UnknownBlockError(const std::string& what) : Error("unknown block: " + what) {}
};

/** Nonce space ran out before a grind found a valid digest. */
class GrindExhaustedError : public Error {
public:
    explicit GrindExhaustedError(const std::string& what) : Error("grind exhausted: " + what) {}
};

} // namespace poemlab

#endif // POEMLAB_ERRORS_HPP
