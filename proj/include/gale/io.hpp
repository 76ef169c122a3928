#pragma once

#include "gale/axioms.hpp"
#include "gale/paths.hpp"

#include <iosfwd>
#include <string>

namespace gale {

/// Malformed input file; line is 1-based (0 when not tied to a line).
class InputError : public std::runtime_error {
public:
    InputError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Observation CSV with header p1,p2,p3,m,x1,x2,x3. Decimal and a/b literals
/// are both read exactly. An empty stream is an empty dataset.
Dataset<Rational> read_observations(std::istream& in);
Dataset<Rational> read_observations_file(const std::string& path);

void write_observations(std::ostream& out, const Dataset<Rational>& data);

/// Three lines of three rational literals separated by spaces or commas.
Mat3q read_matrix(std::istream& in);
Mat3q read_matrix_file(const std::string& path);

/// Curve CSV with header t,y1,y2,y3.
void write_curve(std::ostream& out, const std::vector<PathSample>& samples);
void write_curve(std::ostream& out, const std::vector<CurvePoint>& curve);

/// The ten observations of Gale's 1960 example, exact.
Dataset<Rational> gale_table();

template <class T> Dataset<double> to_double(const Dataset<T>& data) {
    Dataset<double> out;
    out.provenance = data.provenance;
    for (const auto& o : data.rows)
        out.rows.emplace_back(PriceSystem<double>(to_double(o.p.vec())), to_double(o.m),
                              Bundle<double>(to_double(o.x.vec())));
    return out;
}

} // namespace gale
