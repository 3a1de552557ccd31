class Account {
public:
    double balance;
    void add(double amount) {
        balance = balance + amount;
    }
};
