var bus = { listeners: {} };
var state = { pings: 0, drops: 0 };

function emit(name) {
  var fn = bus.listeners[name];
  if (fn) {
    fn();
  }
}

function onPing() {
  state.pings += 1;
}

function onDrop() {
  state.drops += 1;
}

bus.listeners.ping = onPing;
emit('ping');

document.addEventListener('load', function bootstrap() {
  emit('ping');
});
