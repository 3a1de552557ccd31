#include <iostream>
class ReportPrinter {
public:
    void print(int total) {
        printHeader();
        std::cout << total << std::endl;
    }
    void printHeader() {
        std::cout << "Report" << std::endl;
        std::cout << "------" << std::endl;
    }
};
