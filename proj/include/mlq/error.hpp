#pragma once
#include <stdexcept>
#include <string>

namespace mlq {

// Numbering mirrors the C API status codes in mlq.h.
enum class Err {
    InvalidInput = 1,
    SizeMismatch,
    SingularSample,
    OutsideBigCell,
    Overflow,
    NotOnHyperboloid,
    WrongSheet,
    StepUnderflow,
    OutOfInterval,
    BranchCut,
    NoConvergence,
    DegenerateDiscriminant,
    FrameHole,
    NotHorizontal,
    DomainError,
    DegenerateFrame,
    GridTooCoarse,
    DegenerateLambda0,
    ZeroB,
    NotElliptic,
    Config,
    Io,
};

const char* err_name(Err e);

class Error : public std::runtime_error {
public:
    Error(Err code, const std::string& msg)
        : std::runtime_error(std::string(err_name(code)) + ": " + msg), code_(code) {}
    Err code() const { return code_; }

private:
    Err code_;
};

}  // namespace mlq
