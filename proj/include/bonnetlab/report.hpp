#pragma once

#include <string>
#include <vector>

#include "bonnetlab/forms.hpp"
#include "bonnetlab/lorentz.hpp"

namespace bonnetlab {

/// Fixed float formatting used by every report writer: shortest-field %.17g,
/// enough digits to round-trip doubles and stable across runs.
std::string fmt17(double v);

/// Minimal deterministic JSON emitter: keys appear in insertion order,
/// numbers through fmt17. (Config *parsing* uses nlohmann/json; emission is
/// pinned here so reports are byte-identical run to run.)
class JsonWriter {
public:
    JsonWriter& begin_object();
    JsonWriter& end_object();
    JsonWriter& begin_array();
    JsonWriter& end_array();
    JsonWriter& key(const std::string& k);
    JsonWriter& value(double v);
    JsonWriter& value(long v);
    JsonWriter& value(int v) { return value(static_cast<long>(v)); }
    JsonWriter& value(const std::string& s);
    JsonWriter& value(const char* s) { return value(std::string(s)); }
    JsonWriter& value_bool(bool b);
    JsonWriter& value_null();
    JsonWriter& raw(const std::string& pre_rendered_json);

    std::string str() const { return out_; }

private:
    void separator();
    std::string out_;
    std::vector<bool> first_; // per nesting level
    bool pending_key_ = false;
};

std::string json_escape(const std::string& s);

/// CSV with header "i,j,s,t,value", row-major (i outer, j inner).
std::string csv_field(const GridScalar& field);

/// Gnuplot-ready matrix: one line per i, nt columns.
std::string dat_field(const GridScalar& field);

/// Wavefront OBJ: vertices in row-major node order, quad faces.
std::string obj_mesh(const Grid2D<LVec3>& x);

void write_file(const std::string& path, const std::string& content);

} // namespace bonnetlab
