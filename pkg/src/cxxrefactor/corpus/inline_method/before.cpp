class Pricing {
public:
    double total(double price, int qty) {
        double base = price * qty;
        return base + shipping(qty);
    }
    double shipping(int items) {
        return items * 1.5;
    }
};
