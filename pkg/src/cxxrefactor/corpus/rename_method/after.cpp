class Account {
public:
    double balance;
    void deposit(double amount) {
        balance = balance + amount;
    }
};
