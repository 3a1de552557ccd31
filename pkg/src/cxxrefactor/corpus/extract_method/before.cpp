#include <iostream>
class ReportPrinter {
public:
    void print(int total) {
        std::cout << "Report" << std::endl;
        std::cout << "------" << std::endl;
        std::cout << total << std::endl;
    }
};
