class Invoice {
public:
    double amount;
};
class TaxTable {
public:
    int year;
    double tax(double rate) {
        double t = rate * 100.0;
        return t / 100.0;
    }
};
