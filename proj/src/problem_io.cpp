#include "zonoplan/problem_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace zonoplan
{

using nlohmann::json;

std::string format_double(double v)
{
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

namespace
{

json matrix_to_json(const SpMat& M)
{
    json j;
    j["rows"] = static_cast<int>(M.rows());
    j["cols"] = static_cast<int>(M.cols());
    json trips = json::array();
    for (int k = 0; k < M.outerSize(); ++k)
    {
        for (SpMat::InnerIterator it(M, k); it; ++it)
        {
            trips.push_back({static_cast<int>(it.row()), static_cast<int>(it.col()), it.value()});
        }
    }
    j["triplets"] = std::move(trips);
    return j;
}

SpMat matrix_from_json(const json& j, const char* field)
{
    if (!j.is_object() || !j.contains("rows") || !j.contains("cols") || !j.contains("triplets"))
    {
        throw InvalidArgument(std::string("problem file: field '") + field +
                              "' must hold rows/cols/triplets.");
    }
    const int rows = j.at("rows").get<int>();
    const int cols = j.at("cols").get<int>();
    std::vector<Triplet> trips;
    for (const auto& t : j.at("triplets"))
    {
        if (!t.is_array() || t.size() != 3)
        {
            throw InvalidArgument(std::string("problem file: field '") + field +
                                  "' has a malformed triplet.");
        }
        trips.emplace_back(t[0].get<int>(), t[1].get<int>(), t[2].get<double>());
    }
    return make_sparse(rows, cols, trips);
}

json vector_to_json(const Vec& v)
{
    json arr = json::array();
    for (int i = 0; i < v.size(); ++i)
    {
        arr.push_back(v(i));
    }
    return arr;
}

Vec vector_from_json(const json& j, const char* field)
{
    if (!j.is_array())
    {
        throw InvalidArgument(std::string("problem file: field '") + field + "' must be an array.");
    }
    Vec v(static_cast<int>(j.size()));
    for (size_t i = 0; i < j.size(); ++i)
    {
        v(static_cast<int>(i)) = j[i].get<double>();
    }
    return v;
}

} // namespace

std::string problem_to_json(const ProblemFile& pf)
{
    json j;
    j["form"] = pf.Z.form == Form::Canonical ? "canonical" : "01";
    j["n"] = pf.Z.n();
    j["Gc"] = matrix_to_json(pf.Z.Gc);
    j["Gb"] = matrix_to_json(pf.Z.Gb);
    j["c"] = vector_to_json(pf.Z.c);
    j["Ac"] = matrix_to_json(pf.Z.Ac);
    j["Ab"] = matrix_to_json(pf.Z.Ab);
    j["b"] = vector_to_json(pf.Z.b);
    if (pf.P.has_value())
    {
        j["P"] = matrix_to_json(*pf.P);
    }
    if (pf.q.has_value())
    {
        j["q"] = vector_to_json(*pf.q);
    }
    return j.dump(2) + "\n";
}

ProblemFile problem_from_json(const std::string& text)
{
    const json j = json::parse(text); // json::parse_error carries byte-position diagnostics
    ProblemFile pf;
    const std::string form = j.at("form").get<std::string>();
    Form f;
    if (form == "canonical")
    {
        f = Form::Canonical;
    }
    else if (form == "01")
    {
        f = Form::ZeroOne;
    }
    else
    {
        throw InvalidArgument("problem file: field 'form' must be 'canonical' or '01'.");
    }
    SpMat Gc = matrix_from_json(j.at("Gc"), "Gc");
    SpMat Gb = matrix_from_json(j.at("Gb"), "Gb");
    Vec c = vector_from_json(j.at("c"), "c");
    SpMat Ac = matrix_from_json(j.at("Ac"), "Ac");
    SpMat Ab = matrix_from_json(j.at("Ab"), "Ab");
    Vec b = vector_from_json(j.at("b"), "b");
    pf.Z = HybZono(Gc, Gb, c, Ac, Ab, b, f);
    if (j.at("n").get<int>() != pf.Z.n())
    {
        throw InvalidArgument("problem file: field 'n' does not match the center length.");
    }
    if (j.contains("P"))
    {
        pf.P = matrix_from_json(j.at("P"), "P");
    }
    if (j.contains("q"))
    {
        pf.q = vector_from_json(j.at("q"), "q");
    }
    return pf;
}

void save_problem(const ProblemFile& pf, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("save_problem: cannot open " + path);
    }
    out << problem_to_json(pf);
}

ProblemFile load_problem(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("load_problem: cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    return problem_from_json(ss.str());
}

void save_set(const HybZono& Z, const std::string& path)
{
    ProblemFile pf;
    pf.Z = Z;
    save_problem(pf, path);
}

void write_report(const std::vector<RunRecord>& rows, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("write_report: cannot open " + path);
    }
    out << kRunReportHeader;
    for (const auto& r : rows)
    {
        out << r.instance_id << ',' << r.seed << ',' << r.status << ',' << r.iters << ','
            << r.iters_ph1 << ',' << format_double(r.wall_s) << ',' << format_double(r.r_p) << ','
            << format_double(r.objective) << ',' << (r.verified ? "1" : "0") << '\n';
    }
}

void save_trajectory(const std::vector<TrajectoryStage>& stages, const std::string& path)
{
    json arr = json::array();
    for (const auto& st : stages)
    {
        json rec;
        rec["k"] = st.k;
        rec["x"] = vector_to_json(st.x);
        rec["u"] = vector_to_json(st.u);
        arr.push_back(std::move(rec));
    }
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("save_trajectory: cannot open " + path);
    }
    out << arr.dump(2) << "\n";
}

std::vector<TrajectoryStage> load_trajectory(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
    {
        throw std::runtime_error("load_trajectory: cannot open " + path);
    }
    std::stringstream ss;
    ss << in.rdbuf();
    const json arr = json::parse(ss.str());
    std::vector<TrajectoryStage> stages;
    for (const auto& rec : arr)
    {
        TrajectoryStage st;
        st.k = rec.at("k").get<int>();
        st.x = vector_from_json(rec.at("x"), "x");
        st.u = vector_from_json(rec.at("u"), "u");
        stages.push_back(std::move(st));
    }
    return stages;
}

void write_complexity_csv(const std::vector<SetComplexity>& rows, const std::string& path)
{
    std::ofstream out(path);
    if (!out)
    {
        throw std::runtime_error("write_complexity_csv: cannot open " + path);
    }
    out << "# set-complexity v1\nstep,n,n_Gc,n_Gb,n_C,nnz_G,nnz_A\n";
    for (size_t k = 0; k < rows.size(); ++k)
    {
        const auto& r = rows[k];
        out << k << ',' << r.n << ',' << r.n_Gc << ',' << r.n_Gb << ',' << r.n_C << ',' << r.nnz_G
            << ',' << r.nnz_A << '\n';
    }
}

} // namespace zonoplan
