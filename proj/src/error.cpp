#include "mlq/error.hpp"

namespace mlq {

const char* err_name(Err e) {
    switch (e) {
        case Err::InvalidInput: return "InvalidInput";
        case Err::SizeMismatch: return "SizeMismatch";
        case Err::SingularSample: return "SingularSample";
        case Err::OutsideBigCell: return "OutsideBigCell";
        case Err::Overflow: return "Overflow";
        case Err::NotOnHyperboloid: return "NotOnHyperboloid";
        case Err::WrongSheet: return "WrongSheet";
        case Err::StepUnderflow: return "StepUnderflow";
        case Err::OutOfInterval: return "OutOfInterval";
        case Err::BranchCut: return "BranchCut";
        case Err::NoConvergence: return "NoConvergence";
        case Err::DegenerateDiscriminant: return "DegenerateDiscriminant";
        case Err::FrameHole: return "FrameHole";
        case Err::NotHorizontal: return "NotHorizontal";
        case Err::DomainError: return "DomainError";
        case Err::DegenerateFrame: return "DegenerateFrame";
        case Err::GridTooCoarse: return "GridTooCoarse";
        case Err::DegenerateLambda0: return "DegenerateLambda0";
        case Err::ZeroB: return "ZeroB";
        case Err::NotElliptic: return "NotElliptic";
        case Err::Config: return "ConfigError";
        case Err::Io: return "IoError";
    }
    return "Unknown";
}

}  // namespace mlq
