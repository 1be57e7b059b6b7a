#include "bonnetlab/report.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace bonnetlab {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (char c : s) {
        switch (c) {
            case '"': out += "\\\""; break;
            case '\\': out += "\\\\"; break;
            case '\n': out += "\\n"; break;
            case '\t': out += "\\t"; break;
            case '\r': out += "\\r"; break;
            default:
                if (static_cast<unsigned char>(c) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof(buf), "\\u%04x", c);
                    out += buf;
                } else {
                    out += c;
                }
        }
    }
    return out;
}

void JsonWriter::separator() {
    if (pending_key_) {
        pending_key_ = false;
        return;
    }
    if (!first_.empty()) {
        if (!first_.back()) out_ += ",";
        first_.back() = false;
    }
}

JsonWriter& JsonWriter::begin_object() {
    separator();
    out_ += "{";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_object() {
    out_ += "}";
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::begin_array() {
    separator();
    out_ += "[";
    first_.push_back(true);
    return *this;
}

JsonWriter& JsonWriter::end_array() {
    out_ += "]";
    first_.pop_back();
    return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
    separator();
    out_ += "\"" + json_escape(k) + "\":";
    pending_key_ = true;
    return *this;
}

JsonWriter& JsonWriter::value(double v) {
    separator();
    out_ += fmt17(v);
    return *this;
}

JsonWriter& JsonWriter::value(long v) {
    separator();
    out_ += std::to_string(v);
    return *this;
}

JsonWriter& JsonWriter::value(const std::string& s) {
    separator();
    out_ += "\"" + json_escape(s) + "\"";
    return *this;
}

JsonWriter& JsonWriter::value_bool(bool b) {
    separator();
    out_ += b ? "true" : "false";
    return *this;
}

JsonWriter& JsonWriter::value_null() {
    separator();
    out_ += "null";
    return *this;
}

JsonWriter& JsonWriter::raw(const std::string& pre) {
    separator();
    out_ += pre;
    return *this;
}

std::string csv_field(const GridScalar& field) {
    const GridShape& sh = field.shape();
    std::string out = "i,j,s,t,value\n";
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j)
            out += std::to_string(i) + "," + std::to_string(j) + "," + fmt17(sh.s(i)) + "," +
                   fmt17(sh.t(j)) + "," + fmt17(field(i, j)) + "\n";
    return out;
}

std::string dat_field(const GridScalar& field) {
    const GridShape& sh = field.shape();
    std::string out;
    for (int i = 0; i < sh.ns; ++i) {
        for (int j = 0; j < sh.nt; ++j) {
            if (j) out += " ";
            out += fmt17(field(i, j));
        }
        out += "\n";
    }
    return out;
}

std::string obj_mesh(const Grid2D<LVec3>& x) {
    const GridShape& sh = x.shape();
    std::string out;
    for (int i = 0; i < sh.ns; ++i)
        for (int j = 0; j < sh.nt; ++j) {
            const LVec3& p = x(i, j);
            out += "v " + fmt17(p.x0) + " " + fmt17(p.x1) + " " + fmt17(p.x2) + "\n";
        }
    auto vid = [&](int i, int j) { return i * sh.nt + j + 1; };
    for (int i = 0; i + 1 < sh.ns; ++i)
        for (int j = 0; j + 1 < sh.nt; ++j)
            out += "f " + std::to_string(vid(i, j)) + " " + std::to_string(vid(i + 1, j)) + " " +
                   std::to_string(vid(i + 1, j + 1)) + " " + std::to_string(vid(i, j + 1)) + "\n";
    return out;
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for writing: " + path);
    f.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!f) throw std::runtime_error("write failed: " + path);
}

} // namespace bonnetlab
