#include "core/metrics.hpp"

#include <cstdio>
#include <sstream>

#include <nlohmann/json.hpp>

#include "core/dataset.hpp"

namespace cxrsev {

namespace {

std::string format_metric(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

} // namespace

std::int64_t ConfusionMatrix::total() const {
    std::int64_t t = 0;
    for (std::int64_t c : counts)
        t += c;
    return t;
}

std::int64_t ConfusionMatrix::support(int c) const {
    std::int64_t s = 0;
    for (int p = 0; p < k; ++p)
        s += at(c, p);
    return s;
}

ConfusionMatrix confusion_matrix(std::span<const int> y_true, std::span<const int> y_pred,
                                 int k) {
    require(y_true.size() == y_pred.size(), ErrorKind::InvalidArgument,
            "label sequences have different lengths");
    require(k >= 1, ErrorKind::InvalidArgument, "class count must be >= 1");
    ConfusionMatrix cm;
    cm.k = k;
    cm.counts.assign(static_cast<std::size_t>(k) * static_cast<std::size_t>(k), 0);
    cm.class_names.reserve(static_cast<std::size_t>(k));
    for (int c = 0; c < k; ++c)
        cm.class_names.push_back(k == kNumClasses ? class_name(c)
                                                  : "class_" + std::to_string(c));
    for (std::size_t i = 0; i < y_true.size(); ++i) {
        require(y_true[i] >= 0 && y_true[i] < k, ErrorKind::InvalidArgument,
                "true label out of range at position " + std::to_string(i));
        require(y_pred[i] >= 0 && y_pred[i] < k, ErrorKind::InvalidArgument,
                "predicted label out of range at position " + std::to_string(i));
        ++cm.at(y_true[i], y_pred[i]);
    }
    return cm;
}

double accuracy(const ConfusionMatrix& cm) {
    const std::int64_t total = cm.total();
    require(total > 0, ErrorKind::InvalidArgument, "accuracy of an empty matrix");
    std::int64_t correct = 0;
    for (int c = 0; c < cm.k; ++c)
        correct += cm.at(c, c);
    return static_cast<double>(correct) / static_cast<double>(total);
}

ClassMetrics class_metrics(const ConfusionMatrix& cm, int c) {
    require(c >= 0 && c < cm.k, ErrorKind::InvalidArgument, "invalid class index");
    ClassMetrics m;
    const std::int64_t tp = cm.at(c, c);
    std::int64_t fp = 0, fn = 0;
    for (int other = 0; other < cm.k; ++other) {
        if (other == c)
            continue;
        fp += cm.at(other, c);
        fn += cm.at(c, other);
    }
    m.support = cm.support(c);
    if (tp + fp > 0) {
        m.precision = static_cast<double>(tp) / static_cast<double>(tp + fp);
    } else {
        m.degenerate_precision = true;
    }
    if (tp + fn > 0) {
        m.recall = static_cast<double>(tp) / static_cast<double>(tp + fn);
    } else {
        m.degenerate_recall = true;
    }
    if (m.precision + m.recall > 0.0) {
        m.f1 = 2.0 * m.precision * m.recall / (m.precision + m.recall);
    } else {
        m.degenerate_f1 = true;
    }
    return m;
}

double precision_class(const ConfusionMatrix& cm, int c) { return class_metrics(cm, c).precision; }
double recall_class(const ConfusionMatrix& cm, int c) { return class_metrics(cm, c).recall; }
double f1_class(const ConfusionMatrix& cm, int c) { return class_metrics(cm, c).f1; }

MacroReport macro_report(const ConfusionMatrix& cm) {
    MacroReport report;
    report.class_names = cm.class_names;
    for (int c = 0; c < cm.k; ++c) {
        report.per_class.push_back(class_metrics(cm, c));
        report.avg_precision += report.per_class.back().precision;
        report.avg_recall += report.per_class.back().recall;
        report.avg_f1 += report.per_class.back().f1;
        report.avg_support += static_cast<double>(report.per_class.back().support);
    }
    const auto k = static_cast<double>(cm.k);
    report.avg_precision /= k;
    report.avg_recall /= k;
    report.avg_f1 /= k;
    report.avg_support /= k;
    report.overall_accuracy = cm.total() > 0 ? accuracy(cm) : 0.0;
    return report;
}

std::string render_report_text(const MacroReport& report) {
    std::ostringstream out;
    char line[160];
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10s\n", "CLASS", "PRECISION",
                  "RECALL", "F1-SCORE", "SUPPORT");
    out << line;
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const auto& m = report.per_class[c];
        std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10lld\n",
                      report.class_names[c].c_str(), format_metric(m.precision).c_str(),
                      format_metric(m.recall).c_str(), format_metric(m.f1).c_str(),
                      static_cast<long long>(m.support));
        out << line;
    }
    std::snprintf(line, sizeof line, "%-12s %10s %10s %10s %10.1f\n", "AVERAGE",
                  format_metric(report.avg_precision).c_str(),
                  format_metric(report.avg_recall).c_str(),
                  format_metric(report.avg_f1).c_str(), report.avg_support);
    out << line;
    std::snprintf(line, sizeof line, "OVERALL ACCURACY %.4f\n", report.overall_accuracy);
    out << line;
    return out.str();
}

std::string render_report_json(const MacroReport& report) {
    nlohmann::json j;
    j["classes"] = nlohmann::json::array();
    for (std::size_t c = 0; c < report.per_class.size(); ++c) {
        const auto& m = report.per_class[c];
        nlohmann::json row;
        row["name"] = report.class_names[c];
        row["precision"] = m.precision;
        row["recall"] = m.recall;
        row["f1"] = m.f1;
        row["support"] = m.support;
        if (m.degenerate_precision || m.degenerate_recall || m.degenerate_f1)
            row["degenerate"] = true;
        j["classes"].push_back(row);
    }
    j["average"] = {{"precision", report.avg_precision},
                    {"recall", report.avg_recall},
                    {"f1", report.avg_f1},
                    {"support", report.avg_support}};
    j["accuracy"] = report.overall_accuracy;
    return j.dump(2) + "\n";
}

std::string confusion_to_csv(const ConfusionMatrix& cm) {
    std::ostringstream out;
    out << "true\\pred";
    for (int p = 0; p < cm.k; ++p)
        out << ',' << cm.class_names[static_cast<std::size_t>(p)];
    out << '\n';
    for (int t = 0; t < cm.k; ++t) {
        out << cm.class_names[static_cast<std::size_t>(t)];
        for (int p = 0; p < cm.k; ++p)
            out << ',' << cm.at(t, p);
        out << '\n';
    }
    return out.str();
}

} // namespace cxrsev
