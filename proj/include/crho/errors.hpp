#ifndef CRHO_ERRORS_HPP
#define CRHO_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace crho {

enum class ErrorKind {
    Parse,
    DegenerateInput,
    DivisionByZero,
    PrecisionExhausted,
    IterationGuard,
    Ambiguity,
    EmptyMatch,
    NoConvergence,
    Infeasible,
    BlowUp,
    ExtraneousVanishing,
    ConstantCoordinate,
    InsufficientSamples,
};

inline const char* kind_name(ErrorKind k) {
    switch (k) {
        case ErrorKind::Parse: return "parse";
        case ErrorKind::DegenerateInput: return "degenerate-input";
        case ErrorKind::DivisionByZero: return "division-by-zero";
        case ErrorKind::PrecisionExhausted: return "precision-exhaustion";
        case ErrorKind::IterationGuard: return "iteration-guard";
        case ErrorKind::Ambiguity: return "ambiguity";
        case ErrorKind::EmptyMatch: return "empty-match";
        case ErrorKind::NoConvergence: return "no-convergence";
        case ErrorKind::Infeasible: return "infeasible";
        case ErrorKind::BlowUp: return "blow-up";
        case ErrorKind::ExtraneousVanishing: return "extraneous-vanishing";
        case ErrorKind::ConstantCoordinate: return "constant-coordinate";
        case ErrorKind::InsufficientSamples: return "insufficient-samples";
    }
    return "unknown";
}

/// Library error carrying the originating module and a machine-checkable kind.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, std::string module, const std::string& what)
        : std::runtime_error(module + ": " + kind_name(kind) + ": " + what), kind_(kind), module_(std::move(module)) {}

    ErrorKind kind() const { return kind_; }
    const std::string& module() const { return module_; }

    /// Problems with the user's input rather than with the computation.
    bool is_input_error() const { return kind_ == ErrorKind::Parse || kind_ == ErrorKind::DegenerateInput; }

private:
    ErrorKind kind_;
    std::string module_;
};

}  // namespace crho

#endif  // CRHO_ERRORS_HPP
