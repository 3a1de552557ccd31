class Vehicle {
public:
    int speed;
};
class Truck : public Vehicle {
public:
    int load;
    int axles;
};
