class Pricing {
public:
    double total(double price, int qty) {
        double base = price * qty;
        return base + qty * 1.5;
    }
};
