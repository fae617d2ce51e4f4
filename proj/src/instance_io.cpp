#include "fairsched/instance_io.hpp"

#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>
#include <unordered_set>

#include <json.hpp>

namespace fairsched {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void semantic(const std::string& msg) { throw SemanticError(msg); }

int require_int(const ordered_json& obj, const std::string& key, const std::string& locus) {
    if (!obj.contains(key)) throw ParseError(locus + ": missing key \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ParseError(locus + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

int optional_int(const ordered_json& obj, const std::string& key, int fallback,
                 const std::string& locus) {
    if (!obj.contains(key)) return fallback;
    const auto& v = obj.at(key);
    if (!v.is_number_integer()) throw ParseError(locus + ": \"" + key + "\" must be an integer");
    return v.get<int>();
}

std::string require_string(const ordered_json& obj, const std::string& key,
                           const std::string& locus) {
    if (!obj.contains(key)) throw ParseError(locus + ": missing key \"" + key + "\"");
    const auto& v = obj.at(key);
    if (!v.is_string()) throw ParseError(locus + ": \"" + key + "\" must be a string");
    return v.get<std::string>();
}

UtilitySpec parse_utility(const ordered_json& obj, const std::string& locus) {
    std::string kind = require_string(obj, "kind", locus);
    if (kind == "uniform") return UtilitySpec::uniform();
    if (kind == "binary") {
        if (!obj.contains("desired") || !obj.at("desired").is_array()) {
            throw ParseError(locus + ": binary utility needs a \"desired\" array");
        }
        std::set<std::string> desired;
        for (const auto& item : obj.at("desired")) {
            if (!item.is_string()) throw ParseError(locus + ": desired entries must be strings");
            desired.insert(item.get<std::string>());
        }
        return UtilitySpec::binary(std::move(desired));
    }
    if (kind == "general") {
        if (!obj.contains("values") || !obj.at("values").is_object()) {
            throw ParseError(locus + ": general utility needs a \"values\" object");
        }
        std::map<std::string, double> values;
        for (const auto& [cid, v] : obj.at("values").items()) {
            if (!v.is_number()) throw ParseError(locus + ": utility values must be numbers");
            values[cid] = v.get<double>();
        }
        return UtilitySpec::general(std::move(values));
    }
    throw ParseError(locus + ": unknown utility kind \"" + kind + "\"");
}

}  // namespace

Instance parse_instance(const std::string& text) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("instance: ") + e.what());
    }
    if (!doc.is_object()) throw ParseError("instance: top level must be an object");
    if (!doc.contains("students") || !doc.at("students").is_array()) {
        throw ParseError("instance: missing \"students\" array");
    }
    if (!doc.contains("courses") || !doc.at("courses").is_array()) {
        throw ParseError("instance: missing \"courses\" array");
    }

    Instance instance;
    std::unordered_set<std::string> course_ids;
    for (const auto& cj : doc.at("courses")) {
        std::string locus = "course #" + std::to_string(instance.courses.size());
        if (!cj.is_object()) throw ParseError(locus + ": must be an object");
        Course c;
        c.id = require_string(cj, "id", locus);
        locus = "course " + c.id;
        c.origin_id = c.id;
        c.interval.start = require_int(cj, "start", locus);
        c.interval.end = require_int(cj, "end", locus);
        c.credits = optional_int(cj, "credits", 1, locus);
        c.seats = optional_int(cj, "seats", 1, locus);
        if (c.id.empty()) semantic(locus + ": empty id");
        if (!course_ids.insert(c.id).second) semantic("duplicate course id " + c.id);
        if (c.interval.start < 0) semantic(locus + ": negative start");
        if (c.interval.end <= c.interval.start) {
            semantic(locus + ": end " + std::to_string(c.interval.end) +
                     " must exceed start " + std::to_string(c.interval.start));
        }
        if (c.credits < 1) semantic(locus + ": credits must be >= 1");
        if (c.seats < 1) semantic(locus + ": seats must be >= 1");
        instance.courses.push_back(std::move(c));
    }

    std::unordered_set<std::string> student_ids;
    for (const auto& sj : doc.at("students")) {
        std::string locus = "student #" + std::to_string(instance.students.size());
        if (!sj.is_object()) throw ParseError(locus + ": must be an object");
        Student s;
        s.id = require_string(sj, "id", locus);
        locus = "student " + s.id;
        s.credit_cap = require_int(sj, "credit_cap", locus);
        if (!sj.contains("utility") || !sj.at("utility").is_object()) {
            throw ParseError(locus + ": missing \"utility\" object");
        }
        s.utility = parse_utility(sj.at("utility"), locus);
        if (s.id.empty()) semantic(locus + ": empty id");
        if (s.id == "charity") semantic("student id \"charity\" is reserved");
        if (!student_ids.insert(s.id).second) semantic("duplicate student id " + s.id);
        if (s.credit_cap < 0) semantic(locus + ": negative credit cap");
        for (const auto& cid : s.utility.desired) {
            if (!course_ids.count(cid)) {
                semantic(locus + ": desired course " + cid + " does not exist");
            }
        }
        for (const auto& [cid, v] : s.utility.values) {
            if (!course_ids.count(cid)) {
                semantic(locus + ": valued course " + cid + " does not exist");
            }
            if (!std::isfinite(v) || v < 0) {
                semantic(locus + ": utility for " + cid + " must be finite and >= 0");
            }
        }
        instance.students.push_back(std::move(s));
    }
    if (instance.students.empty()) semantic("instance needs at least one student");
    return instance;
}

namespace {

ordered_json utility_to_json(const UtilitySpec& u, const Instance& instance, bool expanded) {
    ordered_json out;
    switch (u.kind) {
        case UtilityKind::Uniform:
            out["kind"] = "uniform";
            break;
        case UtilityKind::Binary: {
            out["kind"] = "binary";
            ordered_json desired = ordered_json::array();
            if (!expanded) {
                for (const auto& cid : u.desired) desired.push_back(cid);
            } else {
                // reference seat copies so the document stands alone
                for (const auto& c : instance.courses) {
                    if (u.desired.count(c.origin_id)) desired.push_back(c.id);
                }
            }
            out["desired"] = std::move(desired);
            break;
        }
        case UtilityKind::General: {
            out["kind"] = "general";
            ordered_json values = ordered_json::object();
            if (!expanded) {
                for (const auto& [cid, v] : u.values) values[cid] = v;
            } else {
                for (const auto& c : instance.courses) {
                    auto it = u.values.find(c.origin_id);
                    if (it != u.values.end()) values[c.id] = it->second;
                }
            }
            out["values"] = std::move(values);
            break;
        }
    }
    return out;
}

}  // namespace

std::string serialize_instance(const Instance& instance) {
    ordered_json doc;
    doc["students"] = ordered_json::array();
    for (const auto& s : instance.students) {
        ordered_json sj;
        sj["id"] = s.id;
        sj["credit_cap"] = s.credit_cap;
        sj["utility"] = utility_to_json(s.utility, instance, instance.expanded);
        doc["students"].push_back(std::move(sj));
    }
    doc["courses"] = ordered_json::array();
    for (const auto& c : instance.courses) {
        ordered_json cj;
        cj["id"] = c.id;
        cj["start"] = c.interval.start;
        cj["end"] = c.interval.end;
        cj["credits"] = c.credits;
        cj["seats"] = c.seats;
        doc["courses"].push_back(std::move(cj));
    }
    return doc.dump(2) + "\n";
}

Allocation parse_allocation(const std::string& text, const Instance& instance) {
    ordered_json doc;
    try {
        doc = ordered_json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("allocation: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("assignments") || !doc.at("assignments").is_object()) {
        throw ParseError("allocation: missing \"assignments\" object");
    }
    Allocation alloc;
    for (const auto& s : instance.students) alloc.assignments[s.id];
    for (const auto& [sid, arr] : doc.at("assignments").items()) {
        if (!arr.is_array()) throw ParseError("allocation: assignments for " + sid + " must be an array");
        for (const auto& item : arr) {
            if (!item.is_string()) throw ParseError("allocation: course ids must be strings");
            alloc.assignments[sid].insert(item.get<std::string>());
        }
    }
    if (doc.contains("charity")) {
        if (!doc.at("charity").is_array()) throw ParseError("allocation: \"charity\" must be an array");
        for (const auto& item : doc.at("charity")) {
            if (!item.is_string()) throw ParseError("allocation: charity ids must be strings");
            alloc.charity.insert(item.get<std::string>());
        }
    } else {
        fill_charity(instance, alloc);
    }
    return alloc;
}

std::string serialize_allocation(const Allocation& alloc) {
    ordered_json doc;
    doc["assignments"] = ordered_json::object();
    for (const auto& [sid, bundle] : alloc.assignments) {
        ordered_json arr = ordered_json::array();
        for (const auto& cid : bundle) arr.push_back(cid);
        doc["assignments"][sid] = std::move(arr);
    }
    ordered_json charity = ordered_json::array();
    for (const auto& cid : alloc.charity) charity.push_back(cid);
    doc["charity"] = std::move(charity);
    return doc.dump(2) + "\n";
}

std::string serialize_allocation_csv(const Allocation& alloc) {
    std::ostringstream out;
    out << "student_id,course_id\n";
    for (const auto& [sid, bundle] : alloc.assignments) {
        for (const auto& cid : bundle) {
            out << csv_escape(sid) << "," << csv_escape(cid) << "\n";
        }
    }
    for (const auto& cid : alloc.charity) {
        out << "," << csv_escape(cid) << "\n";
    }
    return out.str();
}

std::string serialize_validation_report(const ValidationReport& report) {
    ordered_json doc;
    doc["valid"] = report.valid;
    doc["violations"] = ordered_json::array();
    for (const auto& v : report.violations) {
        ordered_json vj;
        vj["kind"] = to_string(v.kind);
        vj["detail"] = v.detail;
        doc["violations"].push_back(std::move(vj));
    }
    return doc.dump(2) + "\n";
}

std::string serialize_audit_report(const AuditReport& report) {
    ordered_json doc;
    doc["social_welfare"] = report.social_welfare;
    doc["min_utility"] = report.min_utility;
    doc["per_student_utility"] = ordered_json::object();
    for (const auto& [sid, v] : report.per_student_utility) {
        doc["per_student_utility"][sid] = v;
    }
    doc["efx"] = report.efx;
    doc["ef1"] = report.ef1;
    if (report.ef1cc.has_value()) {
        doc["ef1cc"] = *report.ef1cc;
    } else {
        doc["ef1cc"] = nullptr;
    }
    doc["envy_witnesses"] = ordered_json::array();
    for (const auto& w : report.envy_witnesses) {
        ordered_json wj;
        wj["envier"] = w.envier;
        wj["envied"] = w.envied;
        wj["detail"] = w.detail;
        doc["envy_witnesses"].push_back(std::move(wj));
    }
    doc["charity_mis_sizes"] = ordered_json::object();
    for (const auto& [sid, v] : report.charity_mis_sizes) {
        doc["charity_mis_sizes"][sid] = v;
    }
    return doc.dump(2) + "\n";
}

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false;
    bool row_started = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        char ch = text[i];
        if (quoted) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                field += ch;
            }
            continue;
        }
        if (ch == '"') {
            quoted = true;
            row_started = true;
        } else if (ch == ',') {
            row.push_back(field);
            field.clear();
            row_started = true;
        } else if (ch == '\n' || ch == '\r') {
            if (ch == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (row_started || !field.empty()) {
                row.push_back(field);
                rows.push_back(row);
            }
            row.clear();
            field.clear();
            row_started = false;
        } else {
            field += ch;
            row_started = true;
        }
    }
    if (row_started || !field.empty()) {
        row.push_back(field);
        rows.push_back(row);
    }
    return rows;
}

}  // namespace

std::vector<DesireTriple> parse_desire_triples_csv(const std::string& text) {
    auto rows = parse_csv(text);
    if (rows.empty()) throw ParseError("desires csv: empty input");
    const auto& header = rows.front();
    if (header.size() < 3 || header[0] != "student_id" || header[1] != "course_id" ||
        header[2] != "desired") {
        throw ParseError("desires csv: expected header student_id,course_id,desired");
    }
    std::vector<DesireTriple> out;
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        if (row.size() < 3) throw ParseError("desires csv: row " + std::to_string(r) + " too short");
        DesireTriple t;
        t.student = row[0];
        t.course = row[1];
        if (row[2] == "1" || row[2] == "true") {
            t.desired = true;
        } else if (row[2] == "0" || row[2] == "false") {
            t.desired = false;
        } else {
            throw ParseError("desires csv: row " + std::to_string(r) +
                             ": desired must be 0/1/true/false");
        }
        out.push_back(std::move(t));
    }
    return out;
}

void apply_desire_triples(Instance& instance, const std::vector<DesireTriple>& triples) {
    std::map<std::string, std::set<std::string>> desires;
    for (const auto& s : instance.students) desires[s.id];
    for (const auto& t : triples) {
        if (!desires.count(t.student)) semantic("desires csv: unknown student " + t.student);
        if (instance.find_course(t.course) == nullptr) {
            semantic("desires csv: unknown course " + t.course);
        }
        if (t.desired) desires[t.student].insert(t.course);
    }
    for (auto& s : instance.students) {
        s.utility = UtilitySpec::binary(std::move(desires[s.id]));
    }
}

std::string csv_escape(const std::string& field) {
    if (field.find_first_of(",\"\n\r") == std::string::npos) return field;
    std::string out = "\"";
    for (char ch : field) {
        if (ch == '"') out += "\"\"";
        else out += ch;
    }
    out += "\"";
    return out;
}

std::string format_number(double v) {
    if (std::isfinite(v) && std::floor(v) == v && std::abs(v) < 9.0e15) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%.0f", v);
        return buf;
    }
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

}  // namespace fairsched
