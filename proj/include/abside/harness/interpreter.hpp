#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "abside/logic/eval.hpp"
#include "abside/surface/ast.hpp"

namespace abside::harness {

// Concrete heap. Missing cells read as the zero of their type; arrays store
// their length in the `length` cell and elements in arr(i) cells.
struct ExecState {
    logic::HeapCells heap;
    std::map<logic::ObjId, std::string> types;  // class name, "int[]" or "boolean[]"
    logic::ObjId next_id = 1;                  // greater than every allocated id
};

enum class Outcome { Normal, RuntimeError, Diverged };

struct ExecResult {
    Outcome outcome = Outcome::Normal;
    logic::Value result;  // zero for void methods
    ExecState state;
    std::set<logic::Loc> writes;  // every heap cell assigned, including allocation
    std::string error;
};

// Big-step execution of a type-checked program. Null dereference, index
// out of bounds, negative array size and division by zero end the run with
// RuntimeError; running out of steps ends it with Diverged.
class Interpreter {
public:
    explicit Interpreter(const surface::Program& program, long step_budget = 100000)
        : program_(program), budget_(step_budget) {}

    // With `reads` set, every cell read before this run wrote it is added,
    // so the run is a function of those cells and the arguments.
    ExecResult run(const std::string& cls, const std::string& method, logic::ObjId self,
                   const std::vector<logic::Value>& args, ExecState state, std::set<logic::Loc>* reads = nullptr) const;

private:
    const surface::Program& program_;
    long budget_;
};

}  // namespace abside::harness
