class Animal {
public:
    int age;
    int breathe() {
        int rate = 12;
        return rate * 2;
    }
};
class Dog : public Animal {
public:
};
