#pragma once

#include <stdexcept>
#include <string>

namespace faster {

// Base class for every error this library raises on purpose.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// A CSV row that cannot be parsed (bad quoting, wrong column count,
// invalid attribute JSON, non-finite number). Carries the 1-based line
// number of the offending record.
class MalformedRow : public Error {
public:
    MalformedRow(const std::string& file, size_t line, const std::string& why)
        : Error(file + ":" + std::to_string(line) + ": " + why), line_(line) {}
    size_t line() const { return line_; }

private:
    size_t line_;
};

class DuplicateNodeId : public Error {
public:
    explicit DuplicateNodeId(const std::string& id)
        : Error("duplicate node id: " + id), id_(id) {}
    const std::string& id() const { return id_; }

private:
    std::string id_;
};

// Edge row referencing a node id that is not in the nodes file.
class DanglingEdge : public Error {
public:
    DanglingEdge(const std::string& id, size_t line)
        : Error("edge references missing node \"" + id + "\" (line " +
                std::to_string(line) + ")"),
          id_(id), line_(line) {}
    const std::string& id() const { return id_; }
    size_t line() const { return line_; }

private:
    std::string id_;
    size_t line_;
};

class UnknownNode : public Error {
public:
    explicit UnknownNode(const std::string& id)
        : Error("unknown node: " + id) {}
};

class UnknownProfile : public Error {
public:
    explicit UnknownProfile(const std::string& pid)
        : Error("profile not in blocking graph: " + pid) {}
};

// Query document violates the schema. `path` is a JSON-pointer-ish
// location of the offending field.
class SchemaError : public Error {
public:
    SchemaError(const std::string& path, const std::string& why)
        : Error(path + ": " + why), path_(path) {}
    const std::string& path() const { return path_; }

private:
    std::string path_;
};

class UndeclaredVariable : public Error {
public:
    explicit UndeclaredVariable(const std::string& var)
        : Error("variable \"" + var + "\" is not declared in the pattern"),
          var_(var) {}
    const std::string& var() const { return var_; }

private:
    std::string var_;
};

class BadThreshold : public Error {
public:
    explicit BadThreshold(const std::string& why) : Error(why) {}
};

class UnboundVariableInDemand : public Error {
public:
    explicit UnboundVariableInDemand(const std::string& var)
        : Error("demand predicate references unbound variable \"" + var + "\""),
          var_(var) {}
    const std::string& var() const { return var_; }

private:
    std::string var_;
};

class MissingGroundTruth : public Error {
public:
    explicit MissingGroundTruth(const std::string& pid)
        : Error("pid not covered by ground truth: " + pid), pid_(pid) {}
    const std::string& pid() const { return pid_; }

private:
    std::string pid_;
};

// Wraps whatever a matcher threw, tagged with the pair under comparison.
class MatcherFailure : public Error {
public:
    MatcherFailure(const std::string& a, const std::string& b,
                   const std::string& why)
        : Error("matcher failed on (" + a + ", " + b + "): " + why),
          a_(a), b_(b) {}
    const std::string& first() const { return a_; }
    const std::string& second() const { return b_; }

private:
    std::string a_, b_;
};

} // namespace faster
