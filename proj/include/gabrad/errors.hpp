#pragma once

#include <stdexcept>
#include <string>

namespace gabrad {

/// Every failure mode the library reports. The CLI maps these onto exit
/// codes, tests match on them.
enum class Errc {
    malformed_image,
    unsupported_format,
    non_square_input,
    kernel_larger_than_image,
    non_integer_dimension,
    dimension_mismatch,
    single_class_data,
    non_finite_feature,
    fewer_than_two_classes,
    empty_test_set,
    length_mismatch,
    duplicate_id,
    unknown_class,
    bad_length,
    bad_character,
    misplaced_hyphen,
    empty_input,
    position_not_in_table,
    missing_file,
    malformed_row,
    fingerprint_mismatch,
    io_error,
};

inline const char* errc_name(Errc c) {
    switch (c) {
        case Errc::malformed_image: return "MalformedImage";
        case Errc::unsupported_format: return "UnsupportedFormat";
        case Errc::non_square_input: return "NonSquareInput";
        case Errc::kernel_larger_than_image: return "KernelLargerThanImage";
        case Errc::non_integer_dimension: return "NonIntegerDimension";
        case Errc::dimension_mismatch: return "DimensionMismatch";
        case Errc::single_class_data: return "SingleClassData";
        case Errc::non_finite_feature: return "NonFiniteFeature";
        case Errc::fewer_than_two_classes: return "FewerThanTwoClasses";
        case Errc::empty_test_set: return "EmptyTestSet";
        case Errc::length_mismatch: return "LengthMismatch";
        case Errc::duplicate_id: return "DuplicateId";
        case Errc::unknown_class: return "UnknownClass";
        case Errc::bad_length: return "BadLength";
        case Errc::bad_character: return "BadCharacter";
        case Errc::misplaced_hyphen: return "MisplacedHyphen";
        case Errc::empty_input: return "EmptyInput";
        case Errc::position_not_in_table: return "PositionNotInTable";
        case Errc::missing_file: return "MissingFile";
        case Errc::malformed_row: return "MalformedRow";
        case Errc::fingerprint_mismatch: return "FingerprintMismatch";
        case Errc::io_error: return "IoError";
    }
    return "UnknownError";
}

class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& message)
        : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace gabrad
