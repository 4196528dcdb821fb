#pragma once

#include <cmath>
#include <stdexcept>
#include <string>

// Shared geometric primitives. Image coordinates are x-right, y-down
// throughout; boxes are stored center + size.

namespace aosikit {

inline constexpr const char* kVersion = "0.1.0";

struct Point2D {
    double x = 0.0;
    double y = 0.0;
};

inline Point2D operator+(Point2D a, Point2D b) { return {a.x + b.x, a.y + b.y}; }
inline Point2D operator-(Point2D a, Point2D b) { return {a.x - b.x, a.y - b.y}; }
inline Point2D operator*(double k, Point2D p) { return {k * p.x, k * p.y}; }
inline bool operator==(Point2D a, Point2D b) { return a.x == b.x && a.y == b.y; }

inline double dot(Point2D a, Point2D b) { return a.x * b.x + a.y * b.y; }
inline double norm(Point2D p) { return std::sqrt(dot(p, p)); }
inline double distance(Point2D a, Point2D b) { return norm(a - b); }

struct Box2D {
    double cx = 0.0;
    double cy = 0.0;
    double w = 0.0;
    double h = 0.0;

    Point2D center() const { return {cx, cy}; }
    bool well_formed() const { return w > 0.0 && h > 0.0; }

    // Boundary counts as inside.
    bool contains(Point2D p) const {
        return std::abs(p.x - cx) <= w / 2.0 && std::abs(p.y - cy) <= h / 2.0;
    }
};

inline bool operator==(const Box2D& a, const Box2D& b) {
    return a.cx == b.cx && a.cy == b.cy && a.w == b.w && a.h == b.h;
}

struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

#define AOSIKIT_DEFINE_ERROR(NAME)                                     \
    struct NAME : Error {                                              \
        explicit NAME(const std::string& msg = #NAME) : Error(msg) {}  \
    }

// geometry / head signal
AOSIKIT_DEFINE_ERROR(DegenerateTriangle);
AOSIKIT_DEFINE_ERROR(ZeroRatios);
AOSIKIT_DEFINE_ERROR(FrameGapMismatch);
AOSIKIT_DEFINE_ERROR(TooShort);
AOSIKIT_DEFINE_ERROR(AllDegenerate);

// fusion
AOSIKIT_DEFINE_ERROR(MissingMandatoryFeature);

// attention
AOSIKIT_DEFINE_ERROR(AnnotationOutOfRange);

// skeleton / asymmetry
AOSIKIT_DEFINE_ERROR(ZeroLengthSegment);
AOSIKIT_DEFINE_ERROR(EmptySequence);

// cloud model
AOSIKIT_DEFINE_ERROR(EmptyPart);
AOSIKIT_DEFINE_ERROR(DegenerateCloud);
AOSIKIT_DEFINE_ERROR(MissingPart);
AOSIKIT_DEFINE_ERROR(JointOutsidePart);
AOSIKIT_DEFINE_ERROR(EmptyMask);

// file formats
AOSIKIT_DEFINE_ERROR(ParseError);
AOSIKIT_DEFINE_ERROR(NonMonotonicFrames);
AOSIKIT_DEFINE_ERROR(MissingField);
AOSIKIT_DEFINE_ERROR(UnknownTask);

#undef AOSIKIT_DEFINE_ERROR

}  // namespace aosikit
