var out = [];

var handlers = {
  open: function open() {
    log('open');
  },
  close: function close() {
    log('close');
  },
  drop: function drop() {
    log('drop');
  }
};

function log(msg) {
  out.push(msg);
}

handlers.open();
handlers.close();
