class Invoice {
public:
    double amount;
    double tax(double rate) {
        double t = rate * 100.0;
        return t / 100.0;
    }
};
class TaxTable {
public:
    int year;
};
