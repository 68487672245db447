// Writes a small planted-signal task (corpus.txt, train.xml, test.xml, coarse.map) into a directory.
#include <filesystem>
#include <iostream>

#include "support/synthetic.hpp"
#include "wsd/dataset_io.hpp"

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: make_planted DIR\n";
        return 1;
    }
    const std::filesystem::path dir = argv[1];
    std::filesystem::create_directories(dir);
    synth::PlantedOptions o;
    o.documents = 400;
    o.doc_length = 200;
    o.train = 120;
    o.test = 80;
    o.u_rate = 0.1;
    const auto task = synth::make_planted_task(o);
    wsd::write_text_file(dir / "corpus.txt", synth::corpus_text(task.corpus));
    wsd::write_text_file(dir / "train.xml", task.train_xml);
    wsd::write_text_file(dir / "test.xml", task.test_xml);
    wsd::write_text_file(dir / "coarse.map", "bank%1\tbank.A\nbank%2\tbank.B\nbank%3\tbank.B\n");
    return 0;
}
