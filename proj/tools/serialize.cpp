#include "serialize.hpp"

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace bprh::io {

namespace {

std::string model_family_name(ModelFamily family) {
    return family == ModelFamily::bprhm1 ? "bprhm1" : "bprhm2";
}

}  // namespace

Model make_model_from_strings(const std::string& family, const std::string& baseline,
                              const std::vector<double>& params) {
    Baseline base = Baseline::parse(baseline);
    std::string f = family;
    for (auto& ch : f) ch = static_cast<char>(std::tolower(ch));
    if (f == "bprhm1") {
        if (params.size() != 3) {
            throw std::invalid_argument("bprhm1 takes 3 parameters alpha1,alpha2,alpha3");
        }
        return Model::bprhm1(std::move(base), params[0], params[1], params[2]);
    }
    if (f == "bprhm2") {
        if (params.size() != 4) {
            throw std::invalid_argument("bprhm2 takes 4 parameters theta1,theta2,theta1',theta2'");
        }
        return Model::bprhm2(std::move(base), params[0], params[1], params[2], params[3]);
    }
    throw std::invalid_argument("unknown model family '" + family + "' (bprhm1|bprhm2)");
}

json model_to_json(const Model& model) {
    json j;
    j["family"] = model_family_name(model.family());
    j["baseline"] = model.baseline().to_string();
    if (model.family() == ModelFamily::bprhm1) {
        const auto& p = model.params1();
        j["params"] = {p.alpha1, p.alpha2, p.alpha3};
    } else {
        const auto& p = model.params2();
        j["params"] = {p.theta1, p.theta2, p.theta1p, p.theta2p};
    }
    return j;
}

Model model_from_json(const json& j) {
    return make_model_from_strings(j.at("family").get<std::string>(),
                                   j.at("baseline").get<std::string>(),
                                   j.at("params").get<std::vector<double>>());
}

CensoredSample read_sample_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path + ": cannot open file");
    }
    CensoredSample sample;
    std::string line;
    std::size_t line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::istringstream ls(line);
        std::string tok;
        while (std::getline(ls, tok, ',')) fields.push_back(tok);
        if (!header_seen) {
            header_seen = true;
            if (!fields.empty() && (fields[0] == "y1" || fields[0] == "Y1")) continue;
        }
        if (fields.size() != 2 && fields.size() != 4) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": expected 2 or 4 comma-separated fields, got "
                << fields.size();
            throw std::runtime_error(msg.str());
        }
        CensoredPair pair;
        try {
            pair.y1 = std::stod(fields[0]);
            pair.y2 = std::stod(fields[1]);
            if (fields.size() == 4) {
                pair.delta1 = std::stoi(fields[2]) != 0;
                pair.delta2 = std::stoi(fields[3]) != 0;
            }
        } catch (const std::exception&) {
            std::ostringstream msg;
            msg << path << ":" << line_no << ": malformed numeric field";
            throw std::runtime_error(msg.str());
        }
        sample.pairs.push_back(pair);
    }
    if (sample.pairs.empty()) {
        throw std::runtime_error(path + ": no data rows found");
    }
    return sample;
}

void write_sample_csv(const std::string& path, const CensoredSample& sample) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << "y1,y2,delta1,delta2\n";
    out << std::setprecision(17);
    for (const auto& pair : sample.pairs) {
        out << pair.y1 << "," << pair.y2 << "," << (pair.delta1 ? 1 : 0) << ","
            << (pair.delta2 ? 1 : 0) << "\n";
    }
}

json sample_metadata(const Model& model, const CensoredSample& sample, SamplerKind kind) {
    json j;
    j["model"] = model_to_json(model);
    j["seed"] = sample.seed;
    j["n"] = sample.pairs.size();
    j["p"] = sample.plan.p;
    j["z1"] = sample.plan.z1;
    j["z2"] = sample.plan.z2;
    switch (kind) {
        case SamplerKind::conditional: j["sampler"] = "conditional"; break;
        case SamplerKind::paper_literal: j["sampler"] = "paper-literal"; break;
        case SamplerKind::oracle: j["sampler"] = "oracle"; break;
    }
    return j;
}

void write_json(const std::string& path, const json& j) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error(path + ": cannot open for writing");
    }
    out << j.dump(2) << "\n";
}

json read_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error(path + ": cannot open file");
    }
    json j;
    in >> j;
    return j;
}

std::string target_name(GofTarget target) {
    switch (target) {
        case GofTarget::max: return "max";
        case GofTarget::marginal1: return "marginal1";
        case GofTarget::marginal2: return "marginal2";
        case GofTarget::bivariate: return "bivariate";
    }
    return "?";
}

json gof_report_to_json(const GofReport& report) {
    json j;
    j["target"] = target_name(report.target);
    j["statistic"] = report.statistic;
    j["p_value"] = report.p_value;
    j["method"] = report.method == PvalueMethod::asymptotic ? "asymptotic" : "monte_carlo";
    if (report.method == PvalueMethod::monte_carlo) j["replicates"] = report.replicates;
    j["n"] = report.n;
    return j;
}

json fit_result_to_json(const FitResult& result) {
    json j;
    j["model"] = model_to_json(result.model);
    j["log_likelihood"] = result.log_likelihood;
    j["aic"] = result.aic;
    j["k"] = result.k;
    j["iterations"] = result.iterations;
    j["converged"] = result.converged;
    if (result.standard_errors) j["standard_errors"] = *result.standard_errors;
    return j;
}

}  // namespace bprh::io
