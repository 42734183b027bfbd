#pragma once

#include <stdexcept>
#include <string>

namespace mgmapf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// malformed .map/.scen/instance/solution text; line is 1-based, 0 if unknown
class ParseError : public Error {
 public:
  ParseError(int line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

// plan does not start at the agent's start or teleports
class StructuralError : public Error {
 public:
  StructuralError(int agent, int time, const std::string& what)
      : Error("agent " + std::to_string(agent) + " at t=" + std::to_string(time) + ": " + what),
        agent_(agent),
        time_(time) {}
  int agent() const { return agent_; }
  int time() const { return time_; }

 private:
  int agent_;
  int time_;
};

class IncompletePlan : public Error {
 public:
  using Error::Error;
};

class DisconnectedTerminals : public Error {
 public:
  using Error::Error;
};

class InfeasibleAgent : public Error {
 public:
  using Error::Error;
};

class InvalidInstance : public Error {
 public:
  using Error::Error;
};

}  // namespace mgmapf
