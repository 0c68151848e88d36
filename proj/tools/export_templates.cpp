// Writes every built-in prompt template to <dir>/<name>.txt so deployments
// can tweak wording without a rebuild (TemplateSet::load overlays them).
#include <filesystem>
#include <fstream>
#include <iostream>

#include "llmdisc/templates.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: export_templates <output-dir>\n";
        return 2;
    }
    std::filesystem::path dir(argv[1]);
    std::filesystem::create_directories(dir);
    llmdisc::TemplateSet tmpl = llmdisc::TemplateSet::builtin();
    for (const auto& [name, member] : llmdisc::TemplateSet::fields()) {
        std::ofstream out(dir / (name + ".txt"), std::ios::binary | std::ios::trunc);
        if (!out) {
            std::cerr << "cannot write " << (dir / (name + ".txt")) << "\n";
            return 1;
        }
        out << tmpl.*member << '\n';
    }
    std::cout << "wrote " << llmdisc::TemplateSet::fields().size()
              << " templates to " << dir << "\n";
    return 0;
}
